#include "ccmssc/relaxations.hpp"

#include <numeric>
#include <stdexcept>

namespace ccmssc {

namespace {

using sdp::Equality;
using sdp::Inequality;
using sdp::SymEntry;

SymEntry entry(int block, int i, int j, double value) {
  if (i > j) std::swap(i, j);
  return {block, i, j, value};
}

// Coefficient for a linear term a * X_ij inside <A, X>.
SymEntry linear(int block, int i, int j, double a) { return entry(block, i, j, i == j ? a : 0.5 * a); }

void check_instance(const ReducedInstance& inst) {
  const int m = inst.size();
  if (inst.gram.rows() != m || inst.gram.cols() != m) throw std::invalid_argument("shrunk Gram matrix does not match the weights");
  if (inst.points() != inst.cards.total()) throw std::invalid_argument("cardinalities do not sum to the number of points");
  for (auto [a, b] : inst.cannot)
    if (a < 0 || b < 0 || a >= m || b >= m || a == b) throw std::invalid_argument("cannot-link references an invalid super point");
}

}  // namespace

std::string to_string(RelaxationKind kind) {
  switch (kind) {
    case RelaxationKind::VectorLifting: return "vl";
    case RelaxationKind::MatrixLifting: return "ml";
    case RelaxationKind::PengWei: return "pw";
    case RelaxationKind::AminiLevina: return "al";
  }
  return "?";
}

RelaxationKind relaxation_from_string(const std::string& name) {
  if (name == "vl") return RelaxationKind::VectorLifting;
  if (name == "ml") return RelaxationKind::MatrixLifting;
  if (name == "pw") return RelaxationKind::PengWei;
  if (name == "al") return RelaxationKind::AminiLevina;
  throw std::invalid_argument("unknown relaxation '" + name + "' (expected vl, ml, pw or al)");
}

std::string to_string(CutKind kind) {
  switch (kind) {
    case CutKind::VlTriA: return "vl_tri_a";
    case CutKind::VlTriB: return "vl_tri_b";
    case CutKind::MlTriA: return "ml_tri_a";
    case CutKind::MlTriB: return "ml_tri_b";
  }
  return "?";
}

int ReducedInstance::points() const { return std::accumulate(weights.begin(), weights.end(), 0); }

Vector ReducedInstance::weight_vector() const {
  Vector e(size());
  for (int i = 0; i < size(); ++i) e(i) = weights[static_cast<size_t>(i)];
  return e;
}

ReducedInstance ReducedInstance::root(const Matrix& gram, const CardinalitySpec& cards) {
  return from(gram, ShrinkMap(static_cast<int>(gram.rows())), {}, cards);
}

ReducedInstance ReducedInstance::from(const Matrix& gram, const ShrinkMap& map, const std::vector<IndexPair>& cannot,
                                      const CardinalitySpec& cards) {
  if (gram.rows() != map.points()) throw std::invalid_argument("Gram matrix and shrink map disagree on n");
  ReducedInstance r;
  r.gram = map.shrink(gram);
  r.weights = map.weights();
  r.trace = gram.trace();
  r.diag_sum = map.aggregation() * gram.diagonal();
  r.cards = cards;
  r.cannot = cannot;
  return r;
}

Relaxation build_vl(const ReducedInstance& inst, const std::vector<Cut>& cuts) {
  check_instance(inst);
  const int m = inst.size();
  const int k = inst.cards.k();
  const Vector e = inst.weight_vector();
  Relaxation rel;
  auto& P = rel.problem;
  auto& L = rel.layout;
  L.kind = RelaxationKind::VectorLifting;
  L.m = m;
  L.k = k;
  P.offset = inst.trace;
  for (int j = 0; j < k; ++j) {
    P.dims.push_back(m + 1);
    Matrix c = Matrix::Zero(m + 1, m + 1);
    c.bottomRightCorner(m, m) = -inst.gram / inst.cards[j];
    P.cost.push_back(std::move(c));
    Matrix mask = Matrix::Zero(m + 1, m + 1);
    mask.bottomRightCorner(m, m).setOnes();
    P.mask.push_back(std::move(mask));
  }
  auto& E = P.equalities;
  L.eq_unit = 0;
  for (int j = 0; j < k; ++j) E.push_back({{entry(j, 0, 0, 1.0)}, 1.0});
  L.eq_assign = static_cast<int>(E.size());
  for (int i = 0; i < m; ++i) {
    Equality q{{}, 1.0};
    for (int j = 0; j < k; ++j) q.terms.push_back(linear(j, 0, i + 1, 1.0));
    E.push_back(std::move(q));
  }
  // The last size row follows from the others and the assignment rows.
  L.eq_size = static_cast<int>(E.size());
  for (int j = 0; j + 1 < k; ++j) {
    Equality q{{}, static_cast<double>(inst.cards[j])};
    for (int i = 0; i < m; ++i) q.terms.push_back(linear(j, 0, i + 1, e(i)));
    E.push_back(std::move(q));
  }
  L.eq_diag = static_cast<int>(E.size());
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < m; ++i) E.push_back({{linear(j, i + 1, i + 1, 1.0), linear(j, 0, i + 1, -1.0)}, 0.0});
  L.eq_rowsum = static_cast<int>(E.size());
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < m; ++i) {
      Equality q{{}, 0.0};
      for (int l = 0; l < m; ++l) q.terms.push_back(l == i ? linear(j, i + 1, i + 1, e(i)) : entry(j, i + 1, l + 1, 0.5 * e(l)));
      q.terms.push_back(linear(j, 0, i + 1, -static_cast<double>(inst.cards[j])));
      E.push_back(std::move(q));
    }
  L.eq_cblock = static_cast<int>(E.size());
  L.eq_cannot = static_cast<int>(E.size());
  for (auto [a, b] : inst.cannot)
    for (int h = 0; h < k; ++h) E.push_back({{linear(h, a + 1, b + 1, 1.0)}, 0.0});
  L.eq_end = static_cast<int>(E.size());
  L.eq_mustlink = L.eq_end;

  auto& G = P.inequalities;
  L.in_cannot = 0;
  for (auto [a, b] : inst.cannot)
    for (int h = 0; h < k; ++h) G.push_back({{linear(h, 0, a + 1, 1.0), linear(h, 0, b + 1, 1.0)}, 1.0});
  L.in_cuts = static_cast<int>(G.size());
  for (const auto& c : cuts) {
    const int h = c.cluster;
    const int r = c.r + 1, s = c.s + 1, t = c.t + 1;
    if (c.kind == CutKind::VlTriA) {
      G.push_back({{linear(h, 0, r, 1.0), linear(h, 0, s, 1.0), linear(h, 0, t, 1.0), linear(h, r, s, -1.0),
                    linear(h, r, t, -1.0), linear(h, s, t, -1.0)},
                   1.0});
    } else if (c.kind == CutKind::VlTriB) {
      G.push_back({{linear(h, r, s, 1.0), linear(h, r, t, 1.0), linear(h, 0, r, -1.0), linear(h, s, t, -1.0)}, 0.0});
    } else {
      throw std::invalid_argument("matrix-lifting cut passed to the vector-lifting builder");
    }
  }
  rel.cuts = cuts;
  rel.distance_shift = Vector::Zero(L.eq_end);
  for (int i = 0; i < m; ++i) {
    rel.distance_shift(L.eq_assign + i) = inst.diag_sum(i);
    for (int j = 0; j < k; ++j) rel.distance_shift(L.eq_rowsum + j * m + i) = inst.diag_sum(i) / inst.cards[j];
  }
  return rel;
}

Relaxation build_ml(const ReducedInstance& inst, const std::vector<Cut>& cuts) {
  check_instance(inst);
  const int m = inst.size();
  const int k = inst.cards.k();
  const Vector e = inst.weight_vector();
  Relaxation rel;
  auto& P = rel.problem;
  auto& L = rel.layout;
  L.kind = RelaxationKind::MatrixLifting;
  L.m = m;
  L.k = k;
  P.offset = inst.trace;
  P.dims.push_back(m + k);
  Matrix c = Matrix::Zero(m + k, m + k);
  c.bottomRightCorner(m, m) = -inst.gram;
  P.cost.push_back(std::move(c));
  Matrix mask = Matrix::Ones(m + k, m + k);
  mask.topLeftCorner(k, k).setZero();
  P.mask.push_back(std::move(mask));
  auto X = [k](int i) { return k + i; };

  auto& E = P.equalities;
  L.eq_cblock = 0;
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) E.push_back({{linear(0, a, b, 1.0)}, a == b ? static_cast<double>(inst.cards[a]) : 0.0});
  L.eq_assign = static_cast<int>(E.size());
  for (int i = 0; i < m; ++i) {
    Equality q{{}, 1.0};
    for (int j = 0; j < k; ++j) q.terms.push_back(linear(0, j, X(i), 1.0));
    E.push_back(std::move(q));
  }
  L.eq_size = static_cast<int>(E.size());
  for (int j = 0; j + 1 < k; ++j) {
    Equality q{{}, 0.0};
    for (int i = 0; i < m; ++i) q.terms.push_back(linear(0, j, X(i), e(i)));
    q.terms.push_back(linear(0, j, j, -1.0));
    E.push_back(std::move(q));
  }
  L.eq_rowsum = static_cast<int>(E.size());
  for (int i = 0; i < m; ++i) {
    Equality q{{}, 1.0};
    for (int l = 0; l < m; ++l) q.terms.push_back(l == i ? linear(0, X(i), X(i), e(i)) : entry(0, X(i), X(l), 0.5 * e(l)));
    E.push_back(std::move(q));
  }
  L.eq_diag = static_cast<int>(E.size());
  for (int i = 0; i < m; ++i) {
    Equality q{{linear(0, X(i), X(i), 1.0)}, 0.0};
    for (int j = 0; j < k; ++j) q.terms.push_back(linear(0, j, X(i), -1.0 / inst.cards[j]));
    E.push_back(std::move(q));
  }
  L.eq_cannot = static_cast<int>(E.size());
  for (auto [a, b] : inst.cannot) E.push_back({{linear(0, X(a), X(b), 1.0)}, 0.0});
  L.eq_end = static_cast<int>(E.size());
  L.eq_mustlink = L.eq_end;
  L.eq_unit = L.eq_end;

  auto& G = P.inequalities;
  L.in_cannot = 0;
  for (auto [a, b] : inst.cannot)
    for (int h = 0; h < k; ++h) G.push_back({{linear(0, h, X(a), 1.0), linear(0, h, X(b), 1.0)}, 1.0});
  L.in_cuts = static_cast<int>(G.size());
  for (const auto& cut : cuts) {
    const int r = X(cut.r), s = X(cut.s), t = X(cut.t);
    if (cut.kind == CutKind::MlTriA) {
      G.push_back({{linear(0, r, s, 1.0), linear(0, r, r, -1.0)}, 0.0});
    } else if (cut.kind == CutKind::MlTriB) {
      G.push_back({{linear(0, r, s, 1.0), linear(0, r, t, 1.0), linear(0, r, r, -1.0), linear(0, s, t, -1.0)}, 0.0});
    } else {
      throw std::invalid_argument("vector-lifting cut passed to the matrix-lifting builder");
    }
  }
  rel.cuts = cuts;
  rel.distance_shift = Vector::Zero(L.eq_end);
  rel.distance_shift.segment(L.eq_rowsum, m) = inst.diag_sum;
  return rel;
}

namespace {

Relaxation single_block(const Matrix& gram, RelaxationKind kind) {
  const int n = static_cast<int>(gram.rows());
  Relaxation rel;
  rel.layout.kind = kind;
  rel.layout.m = n;
  auto& P = rel.problem;
  P.offset = gram.trace();
  P.dims = {n};
  P.cost = {-gram};
  P.mask = {Matrix::Ones(n, n)};
  rel.layout.eq_rowsum = 0;
  for (int i = 0; i < n; ++i) {
    Equality q{{}, 1.0};
    for (int l = 0; l < n; ++l) q.terms.push_back(l == i ? linear(0, i, i, 1.0) : entry(0, i, l, 0.5));
    P.equalities.push_back(std::move(q));
  }
  rel.layout.eq_diag = n;
  rel.distance_shift = Vector::Zero(n);
  rel.distance_shift.head(n) = gram.diagonal();
  return rel;
}

}  // namespace

Relaxation build_pw(const Matrix& gram, int k) {
  auto rel = single_block(gram, RelaxationKind::PengWei);
  const int n = static_cast<int>(gram.rows());
  rel.layout.k = k;
  Equality tr{{}, static_cast<double>(k)};
  for (int i = 0; i < n; ++i) tr.terms.push_back(linear(0, i, i, 1.0));
  rel.problem.equalities.push_back(std::move(tr));
  rel.layout.eq_end = static_cast<int>(rel.problem.equalities.size());
  rel.distance_shift.conservativeResize(rel.layout.eq_end);
  rel.distance_shift(n) = 0.0;
  return rel;
}

Relaxation build_al(const Matrix& gram, int k) {
  auto rel = single_block(gram, RelaxationKind::AminiLevina);
  const int n = static_cast<int>(gram.rows());
  rel.layout.k = k;
  for (int i = 0; i < n; ++i) rel.problem.equalities.push_back({{linear(0, i, i, 1.0)}, static_cast<double>(k) / n});
  rel.layout.eq_end = static_cast<int>(rel.problem.equalities.size());
  rel.distance_shift.conservativeResize(rel.layout.eq_end);
  rel.distance_shift.tail(n).setZero();
  return rel;
}

Relaxation build(RelaxationKind kind, const ReducedInstance& inst, const std::vector<Cut>& cuts) {
  switch (kind) {
    case RelaxationKind::VectorLifting: return build_vl(inst, cuts);
    case RelaxationKind::MatrixLifting: return build_ml(inst, cuts);
    default: break;
  }
  if (inst.size() != inst.points() || !inst.cannot.empty() || !cuts.empty())
    throw std::invalid_argument("the Peng-Wei and Amini-Levina relaxations take no constraints or cuts");
  return kind == RelaxationKind::PengWei ? build_pw(inst.gram, inst.cards.k()) : build_al(inst.gram, inst.cards.k());
}

void append_mustlink_rows(Relaxation& rel, const std::vector<IndexPair>& must) {
  auto& L = rel.layout;
  auto& E = rel.problem.equalities;
  if (L.kind != RelaxationKind::VectorLifting && L.kind != RelaxationKind::MatrixLifting)
    throw std::invalid_argument("must-link rows need a vector- or matrix-lifting relaxation");
  const int m = L.m, k = L.k;
  const auto old_rows = rel.distance_shift.size();
  // Some of these rows are implied by the others; the solver copes with rank deficiency.
  for (auto [i, j] : must) {
    if (i < 0 || j < 0 || i >= m || j >= m || i == j) throw std::invalid_argument("invalid must-link pair");
    if (L.kind == RelaxationKind::VectorLifting) {
      for (int h = 0; h < k; ++h)
        for (int t = 0; t < m; ++t) E.push_back({{linear(h, i + 1, t + 1, 1.0), linear(h, j + 1, t + 1, -1.0)}, 0.0});
    } else {
      for (int h = 0; h < k; ++h) E.push_back({{linear(0, h, k + i, 1.0), linear(0, h, k + j, -1.0)}, 0.0});
      for (int t = 0; t < m; ++t) E.push_back({{linear(0, k + i, k + t, 1.0), linear(0, k + j, k + t, -1.0)}, 0.0});
    }
  }
  L.eq_end = static_cast<int>(E.size());
  rel.distance_shift.conservativeResize(L.eq_end);
  rel.distance_shift.tail(L.eq_end - old_rows).setZero();
}

sdp::Solution solve_relaxation(const Relaxation& rel, const sdp::Settings& settings, const sdp::WarmStart* warm) {
  const auto& lambda = rel.distance_shift;
  if (lambda.size() != static_cast<Eigen::Index>(rel.problem.equalities.size()))
    throw std::invalid_argument("distance shift does not match the equality count");
  sdp::Problem shifted = rel.problem;
  shifted.offset = rel.problem.offset;
  for (size_t r = 0; r < shifted.equalities.size(); ++r) {
    const double l = lambda(static_cast<Eigen::Index>(r));
    if (l == 0.0) continue;
    sdp::add_terms(shifted.equalities[r].terms, l, shifted.cost);
    shifted.offset -= l * shifted.equalities[r].rhs;
  }
  // The offset is zero up to rounding; drop it so the solver sees the pure distance form.
  const double residual_offset = shifted.offset;
  shifted.offset = 0.0;
  auto sol = sdp::solve(shifted, settings, warm);
  sol.dual.y -= lambda;
  sol.primal_objective = rel.problem.offset + [&] {
    double v = 0.0;
    for (size_t b = 0; b < sol.x.size(); ++b) v += rel.problem.cost[b].cwiseProduct(sol.x[b]).sum();
    return v;
  }();
  sol.dual_objective += residual_offset;
  return sol;
}

VlPrimal extract_vl(const Relaxation& rel, const std::vector<Matrix>& x) {
  if (rel.layout.kind != RelaxationKind::VectorLifting) throw std::invalid_argument("not a vector-lifting relaxation");
  const int m = rel.layout.m;
  VlPrimal p;
  for (int j = 0; j < rel.layout.k; ++j) {
    const Matrix& y = x[static_cast<size_t>(j)];
    p.pi.push_back(y.col(0).tail(m));
    p.big_pi.push_back(y.bottomRightCorner(m, m));
  }
  return p;
}

MlPrimal extract_ml(const Relaxation& rel, const std::vector<Matrix>& x) {
  if (rel.layout.kind != RelaxationKind::MatrixLifting) throw std::invalid_argument("not a matrix-lifting relaxation");
  const int m = rel.layout.m, k = rel.layout.k;
  return {x[0].bottomLeftCorner(m, k), x[0].bottomRightCorner(m, m)};
}

VlDual extract_vl_dual(const Relaxation& rel, const sdp::Dual& d) {
  const auto& L = rel.layout;
  const int m = L.m, k = L.k;
  const int np = (L.eq_mustlink - L.eq_cannot) / std::max(k, 1);
  VlDual out;
  for (int j = 0; j < k; ++j) out.v.push_back(-d.y(L.eq_unit + j));
  out.y = d.y.segment(L.eq_assign, m);
  for (int j = 0; j < k; ++j) out.alpha.push_back(j + 1 < k ? d.y(L.eq_size + j) : 0.0);
  out.beta.resize(static_cast<size_t>(k));
  out.gamma.resize(static_cast<size_t>(k));
  out.cannot_eq.assign(static_cast<size_t>(k), Vector::Zero(np));
  out.cannot_in.assign(static_cast<size_t>(k), Vector::Zero(np));
  for (int j = 0; j < k; ++j) {
    out.beta[static_cast<size_t>(j)] = d.y.segment(L.eq_diag + j * m, m);
    out.gamma[static_cast<size_t>(j)] = d.y.segment(L.eq_rowsum + j * m, m);
    out.big_v.push_back(d.z[static_cast<size_t>(j)].bottomRightCorner(m, m));
    for (int q = 0; q < np; ++q) {
      out.cannot_eq[static_cast<size_t>(j)](q) = d.y(L.eq_cannot + q * k + j);
      out.cannot_in[static_cast<size_t>(j)](q) = d.w(L.in_cannot + q * k + j);
    }
  }
  out.cut_w = d.w.tail(d.w.size() - L.in_cuts);
  return out;
}

MlDual extract_ml_dual(const Relaxation& rel, const sdp::Dual& d) {
  const auto& L = rel.layout;
  const int m = L.m, k = L.k;
  const int np = L.eq_mustlink - L.eq_cannot;
  MlDual out;
  out.c_mult = Matrix::Zero(k, k);
  int r = L.eq_cblock;
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      const double v = a == b ? d.y(r) : 0.5 * d.y(r);
      out.c_mult(a, b) = v;
      out.c_mult(b, a) = v;
      ++r;
    }
  out.y1 = d.y.segment(L.eq_assign, m);
  out.y2 = Vector::Zero(k);
  out.y2.head(k - 1) = d.y.segment(L.eq_size, k - 1);
  out.alpha1 = d.y.segment(L.eq_rowsum, m);
  out.alpha2 = d.y.segment(L.eq_diag, m);
  out.u = d.z[0].bottomLeftCorner(m, k);
  out.v = d.z[0].bottomRightCorner(m, m);
  out.cannot_eq = d.y.segment(L.eq_cannot, np);
  out.cannot_in = Matrix::Zero(np, k);
  for (int q = 0; q < np; ++q)
    for (int h = 0; h < k; ++h) out.cannot_in(q, h) = d.w(L.in_cannot + q * k + h);
  out.cut_w = d.w.tail(d.w.size() - L.in_cuts);
  return out;
}

double vl_objective(const ReducedInstance& inst, const VlPrimal& p) {
  double s = inst.trace;
  for (int j = 0; j < inst.cards.k(); ++j) s -= inst.gram.cwiseProduct(p.big_pi[static_cast<size_t>(j)]).sum() / inst.cards[j];
  return s;
}

double ml_objective(const ReducedInstance& inst, const MlPrimal& p) { return inst.trace - inst.gram.cwiseProduct(p.z).sum(); }

}  // namespace ccmssc
