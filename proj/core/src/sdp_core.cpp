#include "ccmssc/sdp_core.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace ccmssc::sdp {

namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
constexpr double kSqrt2 = 1.4142135623730951;

struct Layout {
  std::vector<int> dims;
  std::vector<Eigen::Index> offset;  // svec offset of each block
  Eigen::Index psd_size = 0;         // total svec length of the matrix blocks
  Eigen::Index slacks = 0;

  Eigen::Index total() const { return psd_size + slacks; }
  Eigen::Index index(int b, int i, int j) const {
    if (i > j) std::swap(i, j);
    return offset[static_cast<size_t>(b)] + static_cast<Eigen::Index>(j) * (j + 1) / 2 + i;
  }
};

// svec: upper triangle column by column, off-diagonals scaled by sqrt(2).
void svec(const Layout& lay, const std::vector<Matrix>& m, const Vector& slack, Vector& out) {
  out.resize(lay.total());
  for (size_t b = 0; b < m.size(); ++b) {
    Eigen::Index k = lay.offset[b];
    const Matrix& a = m[b];
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i) out(k++) = kSqrt2 * a(i, j);
      out(k++) = a(j, j);
    }
  }
  out.tail(lay.slacks) = slack;
}

void smat(const Layout& lay, const Vector& v, std::vector<Matrix>& m, Vector& slack) {
  m.resize(lay.dims.size());
  for (size_t b = 0; b < lay.dims.size(); ++b) {
    const int n = lay.dims[b];
    m[b].resize(n, n);
    Eigen::Index k = lay.offset[b];
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < j; ++i) {
        const double val = v(k++) / kSqrt2;
        m[b](i, j) = val;
        m[b](j, i) = val;
      }
      m[b](j, j) = v(k++);
    }
  }
  slack = v.tail(lay.slacks);
}

double inner(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i].cwiseProduct(b[i]).sum();
  return s;
}

double fro2(const std::vector<Matrix>& a) {
  double s = 0.0;
  for (const auto& m : a) s += m.squaredNorm();
  return s;
}

struct EigResult {
  Vector values;
  Matrix vectors;
};

EigResult sym_eig(const Matrix& m, bool vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("symmetric eigendecomposition failed");
  return {es.eigenvalues(), vectors ? es.eigenvectors() : Matrix()};
}

Matrix psd_part(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  auto e = sym_eig(sym, true);
  const Eigen::Index n = sym.rows();
  Eigen::Index first = 0;
  while (first < n && e.values(first) <= 0.0) ++first;
  if (first == n) return Matrix::Zero(n, n);
  if (first == 0) return sym;
  const Eigen::Index r = n - first;
  // Use whichever side has lower rank.
  if (r <= first) {
    Matrix v = e.vectors.rightCols(r);
    Matrix vs = v * e.values.tail(r).cwiseSqrt().asDiagonal();
    return vs * vs.transpose();
  }
  Matrix v = e.vectors.leftCols(first);
  Matrix vs = v * (-e.values.head(first)).cwiseSqrt().asDiagonal();
  return sym + vs * vs.transpose();
}

// Solves (A A^T) y = r. Sparse Cholesky when A has full row rank; otherwise a
// dense pseudo-inverse, which returns the minimum-norm solution.
class NormalSolver {
 public:
  explicit NormalSolver(const SpMat& a) {
    Eigen::SparseMatrix<double> aat = (a * a.transpose()).pruned();
    llt_.compute(aat);
    if (llt_.info() == Eigen::Success) {
      const Vector d = llt_.matrixL().nestedExpression().diagonal();
      const double lo = d.cwiseAbs2().minCoeff(), hi = d.cwiseAbs2().maxCoeff();
      if (lo > 1e-11 * hi) return;
    }
    if (aat.rows() > 6000) throw std::runtime_error("constraint rows are linearly dependent");
    dense_ = true;
    Eigen::SelfAdjointEigenSolver<Matrix> es{Matrix(aat)};
    const Vector& lam = es.eigenvalues();
    const double cut = 1e-10 * std::max(1.0, lam.cwiseAbs().maxCoeff());
    Eigen::Index first = 0;
    while (first < lam.size() && lam(first) <= cut) ++first;
    basis_ = es.eigenvectors().rightCols(lam.size() - first);
    inv_ = lam.tail(lam.size() - first).cwiseInverse();
  }
  Vector solve(const Vector& r) const {
    if (dense_) return basis_ * inv_.cwiseProduct(basis_.transpose() * r);
    return llt_.solve(r);
  }
  bool rank_deficient() const { return dense_; }

 private:
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
  bool dense_ = false;
  Matrix basis_;
  Vector inv_;
};

}  // namespace

void Problem::validate() const {
  const auto nb = dims.size();
  if (cost.size() != nb || mask.size() != nb) throw std::invalid_argument("cost and mask must have one matrix per block");
  for (size_t b = 0; b < nb; ++b) {
    if (dims[b] < 1) throw std::invalid_argument("block dimension must be positive");
    if (cost[b].rows() != dims[b] || cost[b].cols() != dims[b] || mask[b].rows() != dims[b] || mask[b].cols() != dims[b])
      throw std::invalid_argument("block matrix has the wrong shape");
    if ((cost[b] - cost[b].transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + cost[b].cwiseAbs().maxCoeff()))
      throw std::invalid_argument("cost matrix is not symmetric");
  }
  auto check = [&](const std::vector<SymEntry>& terms) {
    for (const auto& t : terms) {
      if (t.block < 0 || static_cast<size_t>(t.block) >= nb) throw std::invalid_argument("term references a missing block");
      const int n = dims[static_cast<size_t>(t.block)];
      if (t.row < 0 || t.col < 0 || t.row >= n || t.col >= n || t.row > t.col)
        throw std::invalid_argument("term index out of range or below the diagonal");
    }
  };
  for (const auto& e : equalities) check(e.terms);
  for (const auto& g : inequalities) check(g.terms);
}

double apply_terms(const std::vector<SymEntry>& terms, const std::vector<Matrix>& x) {
  double s = 0.0;
  for (const auto& t : terms) s += (t.row == t.col ? 1.0 : 2.0) * t.value * x[static_cast<size_t>(t.block)](t.row, t.col);
  return s;
}

void add_terms(const std::vector<SymEntry>& terms, double scale, std::vector<Matrix>& out) {
  for (const auto& t : terms) {
    auto& m = out[static_cast<size_t>(t.block)];
    m(t.row, t.col) += scale * t.value;
    if (t.row != t.col) m(t.col, t.row) += scale * t.value;
  }
}

Matrix project_psd(const Matrix& m) { return psd_part(m); }

double negative_eigenvalue_sum(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  auto e = sym_eig(sym, false);
  double s = 0.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) s += std::min(e.values(i), 0.0);
  return s;
}

WarmStart warm_start_from(const Solution& sol) { return {sol.x, sol.dual.s, sol.dual.z, sol.sigma}; }

Solution solve(const Problem& problem, const Settings& settings, const WarmStart* warm) {
  problem.validate();
  const auto start = std::chrono::steady_clock::now();
  const int nb = problem.blocks();
  const int neq = static_cast<int>(problem.equalities.size());
  const int nin = static_cast<int>(problem.inequalities.size());
  const int p = neq + nin;

  Layout lay;
  lay.dims = problem.dims;
  lay.offset.resize(static_cast<size_t>(nb));
  for (int b = 0; b < nb; ++b) {
    lay.offset[static_cast<size_t>(b)] = lay.psd_size;
    lay.psd_size += static_cast<Eigen::Index>(problem.dims[static_cast<size_t>(b)]) * (problem.dims[static_cast<size_t>(b)] + 1) / 2;
  }
  lay.slacks = nin;

  // Constraint matrix in svec coordinates; inequality rows get a +1 slack.
  std::vector<Eigen::Triplet<double>> trip;
  Vector rhs(p);
  for (int r = 0; r < p; ++r) {
    const auto& terms = r < neq ? problem.equalities[static_cast<size_t>(r)].terms : problem.inequalities[static_cast<size_t>(r - neq)].terms;
    rhs(r) = r < neq ? problem.equalities[static_cast<size_t>(r)].rhs : problem.inequalities[static_cast<size_t>(r - neq)].rhs;
    for (const auto& t : terms)
      trip.emplace_back(r, lay.index(t.block, t.row, t.col), t.row == t.col ? t.value : kSqrt2 * t.value);
    if (r >= neq) trip.emplace_back(r, lay.psd_size + (r - neq), 1.0);
  }
  SpMat a(p, lay.total());
  a.setFromTriplets(trip.begin(), trip.end());
  Vector row_norm(p);
  for (int r = 0; r < p; ++r) {
    row_norm(r) = a.row(r).norm();
    if (row_norm(r) == 0.0) {
      if (std::abs(rhs(r)) > 0.0) throw std::invalid_argument("empty constraint row with nonzero right-hand side");
      row_norm(r) = 1.0;
    }
  }
  a = row_norm.cwiseInverse().asDiagonal() * a;
  Vector b = rhs.cwiseQuotient(row_norm);

  const double bscale = std::max(1.0, b.norm());
  double cnorm = 0.0;
  for (const auto& c : problem.cost) cnorm += c.squaredNorm();
  const double cscale = std::max(1.0, std::sqrt(cnorm));
  b /= bscale;
  std::vector<Matrix> cost(problem.cost.size());
  for (int k = 0; k < nb; ++k) cost[static_cast<size_t>(k)] = problem.cost[static_cast<size_t>(k)] / cscale;
  const double norm_b = b.norm();
  const double norm_c = std::sqrt(fro2(cost));

  NormalSolver normal(a);
  const SpMat at = a.transpose();

  std::vector<Matrix> x(static_cast<size_t>(nb)), s(static_cast<size_t>(nb)), z(static_cast<size_t>(nb));
  for (int k = 0; k < nb; ++k) {
    const int n = problem.dims[static_cast<size_t>(k)];
    x[static_cast<size_t>(k)] = Matrix::Zero(n, n);
    s[static_cast<size_t>(k)] = Matrix::Zero(n, n);
    z[static_cast<size_t>(k)] = Matrix::Zero(n, n);
  }
  Vector xs = Vector::Zero(nin), zs = Vector::Zero(nin);
  double sigma = settings.sigma;
  if (warm && warm->x.size() == static_cast<size_t>(nb)) {
    bool ok = true;
    for (int k = 0; k < nb; ++k) {
      const int n = problem.dims[static_cast<size_t>(k)];
      ok = ok && warm->x[static_cast<size_t>(k)].rows() == n && warm->s.size() == static_cast<size_t>(nb) &&
           warm->s[static_cast<size_t>(k)].rows() == n && warm->z.size() == static_cast<size_t>(nb) &&
           warm->z[static_cast<size_t>(k)].rows() == n;
    }
    if (ok) {
      for (int k = 0; k < nb; ++k) {
        x[static_cast<size_t>(k)] = warm->x[static_cast<size_t>(k)] / bscale;
        s[static_cast<size_t>(k)] = warm->s[static_cast<size_t>(k)] / cscale;
        z[static_cast<size_t>(k)] = warm->z[static_cast<size_t>(k)].cwiseProduct(problem.mask[static_cast<size_t>(k)]) / cscale;
      }
      for (int q = 0; q < nin; ++q) {
        const auto& g = problem.inequalities[static_cast<size_t>(q)];
        xs(q) = std::max(0.0, g.rhs - apply_terms(g.terms, warm->x)) / row_norm(neq + q) / bscale;
      }
      sigma = warm->sigma > 0.0 ? warm->sigma : sigma;
    }
  }

  Vector v, rhs_vec, aty_vec;
  std::vector<Matrix> aty(static_cast<size_t>(nb));
  Vector aty_s(nin);
  auto compute_aty = [&](const Vector& y) {
    aty_vec = at * y;
    smat(lay, aty_vec, aty, aty_s);
  };
  // y minimizing the augmented Lagrangian for fixed S, Z, X.
  auto y_update = [&]() -> Vector {
    std::vector<Matrix> m(static_cast<size_t>(nb));
    for (int k = 0; k < nb; ++k) {
      const auto ku = static_cast<size_t>(k);
      m[ku] = cost[ku] - s[ku] - z[ku] - x[ku] / sigma;
    }
    Vector ms = -zs - xs / sigma;
    svec(lay, m, ms, v);
    rhs_vec = a * v + b / sigma;
    return normal.solve(rhs_vec);
  };

  Vector y = y_update();
  compute_aty(y);

  const double tau = 1.618;
  int prim_win = 0, dual_win = 0;
  Solution sol;
  sol.status = Status::IterationLimit;
  double pinf = 1.0, dinf = 1.0, gap = 1.0, eta = 1.0, pobj = 0.0, dobj = 0.0;
  int it = 0;
  for (it = 1; it <= settings.max_iterations; ++it) {
    for (int k = 0; k < nb; ++k) {
      const auto ku = static_cast<size_t>(k);
      s[ku] = psd_part(cost[ku] - aty[ku] - z[ku] - x[ku] / sigma);
    }
    y = y_update();
    compute_aty(y);
    for (int k = 0; k < nb; ++k) {
      const auto ku = static_cast<size_t>(k);
      z[ku] = (cost[ku] - aty[ku] - s[ku] - x[ku] / sigma).cwiseMax(0.0).cwiseProduct(problem.mask[ku]);
    }
    zs = (-aty_s - xs / sigma).cwiseMax(0.0);
    y = y_update();
    compute_aty(y);

    double rd2 = 0.0;
    for (int k = 0; k < nb; ++k) {
      const auto ku = static_cast<size_t>(k);
      Matrix r = aty[ku] + s[ku] + z[ku] - cost[ku];
      rd2 += r.squaredNorm();
      x[ku] += tau * sigma * r;
    }
    Vector rs = aty_s + zs;
    rd2 += rs.squaredNorm();
    xs += tau * sigma * rs;

    const bool last = it == settings.max_iterations;
    if (it % settings.check_every != 0 && !last) continue;

    dinf = std::sqrt(rd2) / (1.0 + norm_c);
    svec(lay, x, xs, v);
    pinf = (a * v - b).norm() / (1.0 + norm_b);
    pobj = inner(cost, x);
    dobj = b.dot(y);
    gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double xnorm = std::sqrt(fro2(x) + xs.squaredNorm());
    double neg_mask = xs.cwiseMin(0.0).squaredNorm();
    for (int k = 0; k < nb; ++k) {
      const auto ku = static_cast<size_t>(k);
      neg_mask += x[ku].cwiseMin(0.0).cwiseProduct(problem.mask[ku]).squaredNorm();
    }
    const double kn = std::sqrt(neg_mask) / (1.0 + xnorm);
    double kx = 0.0;
    if (std::max({pinf, dinf, gap, kn}) < settings.tol || it % 50 == 0 || last) {
      double neg_eig = 0.0;
      for (int k = 0; k < nb; ++k) {
        auto e = sym_eig(0.5 * (x[static_cast<size_t>(k)] + x[static_cast<size_t>(k)].transpose()), false);
        neg_eig += e.values.cwiseMin(0.0).squaredNorm();
      }
      kx = std::sqrt(neg_eig) / (1.0 + xnorm);
    } else {
      kx = 1.0;  // unknown; not converged yet
    }
    eta = std::max({pinf, dinf, gap, kn, kx});
    if (eta < settings.tol) {
      sol.status = Status::Converged;
      break;
    }
    if (settings.time_limit > 0.0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > settings.time_limit) {
      sol.status = Status::TimeLimit;
      break;
    }
    if (it % 50 == 0) {
      const double pr = std::max({pinf, kn, kx});
      if (pr < dinf / 3.0)
        ++prim_win;
      else if (dinf < pr / 3.0)
        ++dual_win;
      if (prim_win >= 3) {
        sigma *= 1.5;
        prim_win = 0;
      }
      if (dual_win >= 3) {
        sigma /= 1.5;
        dual_win = 0;
      }
    }
  }

  sol.iterations = std::min(it, settings.max_iterations);
  sol.sigma = sigma;
  sol.primal_infeasibility = pinf;
  sol.dual_infeasibility = dinf;
  sol.relative_gap = gap;
  sol.kkt_residual = eta;

  sol.x.resize(static_cast<size_t>(nb));
  sol.dual.s.resize(static_cast<size_t>(nb));
  sol.dual.z.resize(static_cast<size_t>(nb));
  for (int k = 0; k < nb; ++k) {
    const auto ku = static_cast<size_t>(k);
    sol.x[ku] = psd_part(x[ku]) * bscale;
    sol.dual.s[ku] = s[ku] * cscale;
    sol.dual.z[ku] = z[ku] * cscale;
  }
  Vector yorig = y.cwiseQuotient(row_norm) * cscale;
  sol.dual.y = yorig.head(neq);
  sol.dual.w = (-yorig.tail(nin)).cwiseMax(0.0);
  sol.primal_objective = problem.offset + inner(problem.cost, sol.x);
  sol.dual_objective = problem.offset + rhs.dot(yorig);
  return sol;
}

}  // namespace ccmssc::sdp
