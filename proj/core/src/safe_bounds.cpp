#include "ccmssc/safe_bounds.hpp"

#include "ccmssc/lp_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ccmssc {

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

void add_sym(Matrix& m, int i, int j, double v) {
  m(i, j) += v;
  if (i != j) m(j, i) += v;
}

// cost - A^T y + G^T w, with w clamped.
std::vector<Matrix> affine_part(const sdp::Problem& problem, const sdp::Dual& d, double& constant) {
  std::vector<Matrix> s = problem.cost;
  constant = problem.offset;
  for (size_t r = 0; r < problem.equalities.size(); ++r) {
    const double y = d.y(static_cast<Eigen::Index>(r));
    sdp::add_terms(problem.equalities[r].terms, -y, s);
    constant += y * problem.equalities[r].rhs;
  }
  for (size_t q = 0; q < problem.inequalities.size(); ++q) {
    const double w = std::max(0.0, d.w(static_cast<Eigen::Index>(q)));
    sdp::add_terms(problem.inequalities[q].terms, w, s);
    constant -= w * problem.inequalities[q].rhs;
  }
  return s;
}

void check_dual_shape(const sdp::Problem& problem, const sdp::Dual& d) {
  if (d.y.size() != static_cast<Eigen::Index>(problem.equalities.size()) ||
      d.w.size() != static_cast<Eigen::Index>(problem.inequalities.size()) || d.z.size() != problem.cost.size())
    throw std::invalid_argument("dual does not match the problem");
}

}  // namespace

std::string to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::ErrorBound: return "error_bound";
    case BoundMethod::LpRepair: return "lp_repair";
    case BoundMethod::MinusInfinity: return "minus_infinity";
  }
  return "?";
}

double eig_cap_vl(const CardinalitySpec& cards, int j) { return cards[j] + 1.0; }

double eig_cap_ml(const CardinalitySpec& cards) { return cards.max() + 1.0; }

std::vector<double> eig_caps(const Relaxation& rel, const CardinalitySpec& cards) {
  switch (rel.layout.kind) {
    case RelaxationKind::VectorLifting: {
      std::vector<double> caps;
      for (int j = 0; j < cards.k(); ++j) caps.push_back(eig_cap_vl(cards, j));
      return caps;
    }
    case RelaxationKind::MatrixLifting: return {eig_cap_ml(cards)};
    default: return {1.0};  // nonnegative Z with unit row sums
  }
}

double jansson_bound(const sdp::Problem& problem, const sdp::Dual& d, const std::vector<double>& caps) {
  check_dual_shape(problem, d);
  double lb = 0.0;
  auto s = affine_part(problem, d, lb);
  for (size_t b = 0; b < s.size(); ++b) {
    s[b] -= d.z[b].cwiseMax(0.0).cwiseProduct(problem.mask[b]);
    lb += caps[b] * sdp::negative_eigenvalue_sum(s[b]);
  }
  return lb;
}

double jansson_bound_absorbed(const sdp::Problem& problem, const sdp::Dual& d, const std::vector<double>& caps) {
  check_dual_shape(problem, d);
  if (d.s.size() != problem.cost.size()) throw std::invalid_argument("dual has no PSD part");
  double lb = 0.0;
  auto s = affine_part(problem, d, lb);
  for (size_t b = 0; b < s.size(); ++b) {
    // On the mask, Z takes everything above the PSD part that it can.
    const Matrix z = (s[b] - d.s[b]).cwiseMax(0.0).cwiseProduct(problem.mask[b]);
    s[b] -= z;
    lb += caps[b] * sdp::negative_eigenvalue_sum(s[b]);
  }
  return lb;
}

SafeBound error_bound_vl(const ReducedInstance& inst, const std::vector<Cut>& cuts, const VlDual& d) {
  const int m = inst.size();
  const int k = inst.cards.k();
  const Vector e = inst.weight_vector();
  double lb = inst.trace + d.y.sum();
  for (int j = 0; j < k; ++j) lb += d.alpha[static_cast<size_t>(j)] * inst.cards[j] - d.v[static_cast<size_t>(j)];
  std::vector<Matrix> u(static_cast<size_t>(k));
  for (int j = 0; j < k; ++j) {
    const auto ju = static_cast<size_t>(j);
    const double c = inst.cards[j];
    const Vector& beta = d.beta[ju];
    const Vector& gamma = d.gamma[ju];
    Matrix& U = u[ju];
    U = Matrix::Zero(m + 1, m + 1);
    U(0, 0) = d.v[ju];
    const Vector uj = 0.5 * (-d.y - d.alpha[ju] * e + beta + c * gamma);
    U.col(0).tail(m) = uj;
    U.row(0).tail(m) = uj.transpose();
    Matrix s = -inst.gram / c;
    s.diagonal() -= beta;
    s -= 0.5 * (gamma * e.transpose() + e * gamma.transpose());
    s -= d.big_v[ju].cwiseMax(0.0);
    U.bottomRightCorner(m, m) = s;
  }
  for (size_t q = 0; q < inst.cannot.size(); ++q) {
    const int a = inst.cannot[q].first + 1, b = inst.cannot[q].second + 1;
    for (int h = 0; h < k; ++h) {
      const auto hu = static_cast<size_t>(h);
      add_sym(u[hu], a, b, -0.5 * d.cannot_eq[hu](static_cast<Eigen::Index>(q)));
      const double w = std::max(0.0, d.cannot_in[hu](static_cast<Eigen::Index>(q)));
      add_sym(u[hu], 0, a, 0.5 * w);
      add_sym(u[hu], 0, b, 0.5 * w);
      lb -= w;
    }
  }
  for (size_t q = 0; q < cuts.size(); ++q) {
    const auto& cut = cuts[q];
    const double w = std::max(0.0, d.cut_w(static_cast<Eigen::Index>(q)));
    Matrix& U = u[static_cast<size_t>(cut.cluster)];
    const int r = cut.r + 1, s = cut.s + 1, t = cut.t + 1;
    if (cut.kind == CutKind::VlTriA) {
      // pi_r + pi_s + pi_t - Pi_rs - Pi_rt - Pi_st <= 1
      add_sym(U, 0, r, 0.5 * w);
      add_sym(U, 0, s, 0.5 * w);
      add_sym(U, 0, t, 0.5 * w);
      add_sym(U, r, s, -0.5 * w);
      add_sym(U, r, t, -0.5 * w);
      add_sym(U, s, t, -0.5 * w);
      lb -= w;
    } else {
      // Pi_rs + Pi_rt - pi_r - Pi_st <= 0
      add_sym(U, r, s, 0.5 * w);
      add_sym(U, r, t, 0.5 * w);
      add_sym(U, 0, r, -0.5 * w);
      add_sym(U, s, t, -0.5 * w);
    }
  }
  double pert = 0.0;
  for (int j = 0; j < k; ++j) pert += eig_cap_vl(inst.cards, j) * sdp::negative_eigenvalue_sum(u[static_cast<size_t>(j)]);
  return {lb + pert, BoundMethod::ErrorBound, pert};
}

SafeBound error_bound_ml(const ReducedInstance& inst, const std::vector<Cut>& cuts, const MlDual& d) {
  const int m = inst.size();
  const int k = inst.cards.k();
  const Vector e = inst.weight_vector();
  Vector cdiag(k), cinv(k);
  for (int j = 0; j < k; ++j) {
    cdiag(j) = inst.cards[j];
    cinv(j) = 1.0 / inst.cards[j];
  }
  Matrix S = Matrix::Zero(m + k, m + k);
  // C block: fixed by equalities; S11 = -c_mult + Diag(y2) from the size rows.
  Matrix s11 = -d.c_mult;
  s11.diagonal() += d.y2;
  S.topLeftCorner(k, k) = s11;
  // X block (rows k.., cols 0..k-1).
  Matrix s21 = 0.5 * (-d.y1 * Vector::Ones(k).transpose() - e * d.y2.transpose() + d.alpha2 * cinv.transpose());
  s21 -= d.u.cwiseMax(0.0);
  Matrix s22 = -inst.gram - 0.5 * (d.alpha1 * e.transpose() + e * d.alpha1.transpose());
  s22.diagonal() -= d.alpha2;
  s22 -= d.v.cwiseMax(0.0);
  double lb = inst.trace + d.y1.sum() + d.y2.dot(cdiag) + d.alpha1.sum() - cdiag.dot(s11.diagonal());
  for (size_t q = 0; q < inst.cannot.size(); ++q) {
    const int a = inst.cannot[q].first, b = inst.cannot[q].second;
    const double de = d.cannot_eq(static_cast<Eigen::Index>(q));
    s22(a, b) -= 0.5 * de;
    s22(b, a) -= 0.5 * de;
    for (int h = 0; h < k; ++h) {
      const double w = std::max(0.0, d.cannot_in(static_cast<Eigen::Index>(q), h));
      s21(a, h) += 0.5 * w;
      s21(b, h) += 0.5 * w;
      lb -= w;
    }
  }
  for (size_t q = 0; q < cuts.size(); ++q) {
    const auto& cut = cuts[q];
    const double w = std::max(0.0, d.cut_w(static_cast<Eigen::Index>(q)));
    if (cut.kind == CutKind::MlTriA) {
      // Z_rs - Z_rr <= 0
      add_sym(s22, cut.r, cut.s, 0.5 * w);
      s22(cut.r, cut.r) -= w;
    } else {
      // Z_rs + Z_rt - Z_rr - Z_st <= 0
      add_sym(s22, cut.r, cut.s, 0.5 * w);
      add_sym(s22, cut.r, cut.t, 0.5 * w);
      s22(cut.r, cut.r) -= w;
      add_sym(s22, cut.s, cut.t, -0.5 * w);
    }
  }
  S.bottomLeftCorner(m, k) = s21;
  S.topRightCorner(k, m) = s21.transpose();
  S.bottomRightCorner(m, m) = s22;
  const double pert = eig_cap_ml(inst.cards) * sdp::negative_eigenvalue_sum(S);
  return {lb + pert, BoundMethod::ErrorBound, pert};
}

SafeBound lp_dual_repair(const Relaxation& rel, const sdp::Dual& approx, const std::vector<double>& caps,
                         const LpRepairSettings& settings) {
  const auto& P = rel.problem;
  check_dual_shape(P, approx);
  if (approx.s.size() != P.cost.size()) throw std::invalid_argument("dual has no PSD part");
  const int nb = P.blocks();
  std::vector<Matrix> s_fixed(static_cast<size_t>(nb));
  for (int b = 0; b < nb; ++b) s_fixed[static_cast<size_t>(b)] = sdp::project_psd(approx.s[static_cast<size_t>(b)]);

  // One column per upper-triangle entry that some constraint touches.
  std::vector<std::vector<int>> col_of(static_cast<size_t>(nb));
  for (int b = 0; b < nb; ++b) col_of[static_cast<size_t>(b)].assign(static_cast<size_t>(P.dims[static_cast<size_t>(b)]) * P.dims[static_cast<size_t>(b)], -1);
  struct Entry {
    int b, i, j;
  };
  std::vector<Entry> entries;
  auto touch = [&](const sdp::SymEntry& t) {
    int& c = col_of[static_cast<size_t>(t.block)][static_cast<size_t>(t.col) * P.dims[static_cast<size_t>(t.block)] + t.row];
    if (c < 0) {
      c = static_cast<int>(entries.size());
      entries.push_back({t.block, t.row, t.col});
    }
    return c;
  };
  const int neq = static_cast<int>(P.equalities.size());
  const int nin = static_cast<int>(P.inequalities.size());
  std::vector<Eigen::Triplet<double>> trip;
  for (int r = 0; r < neq + nin; ++r) {
    const auto& terms = r < neq ? P.equalities[static_cast<size_t>(r)].terms : P.inequalities[static_cast<size_t>(r - neq)].terms;
    for (const auto& t : terms) trip.emplace_back(r, touch(t), (t.row == t.col ? 1.0 : 2.0) * t.value);
  }
  // Entries outside every constraint must already satisfy the sign pattern.
  for (int b = 0; b < nb; ++b) {
    const auto bu = static_cast<size_t>(b);
    const Matrix gap = P.cost[bu] - s_fixed[bu];
    for (int j = 0; j < P.dims[bu]; ++j)
      for (int i = 0; i <= j; ++i) {
        if (col_of[bu][static_cast<size_t>(j) * P.dims[bu] + i] >= 0) continue;
        const bool free = P.mask[bu](i, j) == 0.0;
        if ((free && std::abs(gap(i, j)) > 1e-12 * (1.0 + std::abs(P.cost[bu](i, j)))) || (!free && gap(i, j) < 0.0))
          return {kMinusInf, BoundMethod::MinusInfinity};
      }
  }
  const int ne = static_cast<int>(entries.size());
  for (int q = 0; q < nin; ++q) trip.emplace_back(neq + q, ne + q, 1.0);

  lp::StandardForm form;
  form.a.resize(neq + nin, ne + nin);
  form.a.setFromTriplets(trip.begin(), trip.end());
  form.a.makeCompressed();
  form.b.resize(neq + nin);
  for (int r = 0; r < neq; ++r) form.b(r) = P.equalities[static_cast<size_t>(r)].rhs;
  for (int q = 0; q < nin; ++q) form.b(neq + q) = P.inequalities[static_cast<size_t>(q)].rhs;
  form.c = Vector::Zero(ne + nin);
  form.free.assign(static_cast<size_t>(ne + nin), false);
  for (int c = 0; c < ne; ++c) {
    const auto& en = entries[static_cast<size_t>(c)];
    const auto bu = static_cast<size_t>(en.b);
    form.c(c) = (en.i == en.j ? 1.0 : 2.0) * (P.cost[bu](en.i, en.j) - s_fixed[bu](en.i, en.j));
    form.free[static_cast<size_t>(c)] = P.mask[bu](en.i, en.j) == 0.0;
  }

  lp::Settings lps;
  lps.max_iterations = settings.max_iterations;
  lps.time_limit = settings.time_limit;
  lp::Result res;
  try {
    res = lp::solve(form, lps);
  } catch (const std::runtime_error&) {
    return {kMinusInf, BoundMethod::MinusInfinity};
  }
  if (res.status != lp::Status::Optimal) return {kMinusInf, BoundMethod::MinusInfinity};

  sdp::Dual repaired;
  repaired.y = res.duals.head(neq);
  repaired.w = (-res.duals.tail(nin)).cwiseMax(0.0);
  repaired.s = s_fixed;
  double constant = 0.0;
  auto aff = affine_part(P, repaired, constant);
  repaired.z.resize(static_cast<size_t>(nb));
  for (int b = 0; b < nb; ++b) repaired.z[static_cast<size_t>(b)] = aff[static_cast<size_t>(b)] - s_fixed[static_cast<size_t>(b)];
  const double lb = std::max(jansson_bound(P, repaired, caps), jansson_bound_absorbed(P, repaired, caps));
  if (!std::isfinite(lb)) return {kMinusInf, BoundMethod::MinusInfinity};
  return {lb, BoundMethod::LpRepair, std::min(0.0, lb - constant)};
}

SafeBound best_safe_bound(const SafeBound& a, const SafeBound& b) {
  if (a.method == BoundMethod::MinusInfinity) return b;
  if (b.method == BoundMethod::MinusInfinity) return a;
  return a.value >= b.value ? a : b;
}

}  // namespace ccmssc
