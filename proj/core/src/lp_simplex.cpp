#include "ccmssc/lp_simplex.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ccmssc::lp {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct Eta {
  int row;
  Vector d;  // FTRAN column at the pivot
};

// Basis inverse as a sparse LU of a reference basis followed by eta factors.
class BasisFactor {
 public:
  void factor(const SpMat& basis) {
    lu_.analyzePattern(basis);
    lu_.factorize(basis);
    if (lu_.info() != Eigen::Success) throw std::runtime_error("basis factorization failed");
    etas_.clear();
  }
  Vector ftran(const Vector& a) const {
    Vector x = lu_.solve(a);
    for (const auto& e : etas_) {
      const double xr = x(e.row) / e.d(e.row);
      x -= xr * e.d;
      x(e.row) = xr;
    }
    return x;
  }
  Vector btran(Vector u) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const double ur = u(it->row);
      const double dot = it->d.dot(u) - it->d(it->row) * ur;
      u(it->row) = (ur - dot) / it->d(it->row);
    }
    return lu_.transpose().solve(u);
  }
  void push(int row, Vector d) { etas_.push_back({row, std::move(d)}); }
  size_t updates() const { return etas_.size(); }

 private:
  mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

}  // namespace

Result solve(const StandardForm& lp, const Settings& settings) {
  const auto start = std::chrono::steady_clock::now();
  const int m = static_cast<int>(lp.a.rows());
  const int n = static_cast<int>(lp.a.cols());
  if (lp.b.size() != m || lp.c.size() != n) throw std::invalid_argument("LP dimensions disagree");
  if (!lp.free.empty() && static_cast<int>(lp.free.size()) != n) throw std::invalid_argument("free flags must cover every column");

  // Columns n..n+m-1 are artificials; rows are flipped so that b >= 0.
  Vector sign = Vector::Ones(m);
  for (int i = 0; i < m; ++i)
    if (lp.b(i) < 0) sign(i) = -1.0;
  SpMat a = sign.asDiagonal() * lp.a;
  a.makeCompressed();
  const Vector b = sign.cwiseProduct(lp.b);
  const int total = n + m;
  auto is_free = [&](int j) { return j < n && !lp.free.empty() && lp.free[static_cast<size_t>(j)]; };
  auto column = [&](int j) -> Vector {
    Vector col = Vector::Zero(m);
    if (j >= n) {
      col(j - n) = 1.0;
    } else {
      for (SpMat::InnerIterator it(a, j); it; ++it) col(it.row()) = it.value();
    }
    return col;
  };

  // Start from unit columns where a nonnegative one matches the row, else an artificial.
  std::vector<int> basis(static_cast<size_t>(m), -1);
  std::vector<int> where(static_cast<size_t>(total), -1);
  for (int j = 0; j < n; ++j) {
    if (is_free(j) || a.col(j).nonZeros() != 1) continue;
    SpMat::InnerIterator it(a, j);
    if (it.value() > 0.0 && basis[static_cast<size_t>(it.row())] < 0) {
      basis[static_cast<size_t>(it.row())] = j;
    }
  }
  Vector x = Vector::Zero(total);
  for (int i = 0; i < m; ++i) {
    int& j = basis[static_cast<size_t>(i)];
    if (j < 0) j = n + i;
    where[static_cast<size_t>(j)] = i;
  }

  BasisFactor factor;
  auto refactor = [&]() {
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < m; ++i) {
      const int j = basis[static_cast<size_t>(i)];
      if (j >= n) {
        trip.emplace_back(j - n, i, 1.0);
      } else {
        for (SpMat::InnerIterator it(a, j); it; ++it) trip.emplace_back(static_cast<int>(it.row()), i, it.value());
      }
    }
    SpMat bm(m, m);
    bm.setFromTriplets(trip.begin(), trip.end());
    bm.makeCompressed();
    factor.factor(bm);
    Vector xb = factor.ftran(b);
    for (int i = 0; i < m; ++i) x(basis[static_cast<size_t>(i)]) = xb(i);
  };
  refactor();

  Result res;
  int iter = 0;
  for (int phase = 1; phase <= 2; ++phase) {
    Vector cost = Vector::Zero(total);
    if (phase == 1) {
      cost.tail(m).setOnes();
    } else {
      cost.head(n) = lp.c;
    }
    int degenerate_run = 0;
    while (true) {
      if (iter >= settings.max_iterations) {
        res.status = Status::IterationLimit;
        res.iterations = iter;
        return res;
      }
      if (settings.time_limit > 0.0 &&
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > settings.time_limit) {
        res.status = Status::IterationLimit;
        res.iterations = iter;
        return res;
      }
      Vector cb(m);
      for (int i = 0; i < m; ++i) cb(i) = cost(basis[static_cast<size_t>(i)]);
      const Vector pi = factor.btran(cb);

      // Pricing: Dantzig, switching to the lowest index after a long degenerate run.
      const bool bland = degenerate_run > 50;
      int enter = -1;
      double best = 0.0;
      double dir = 1.0;
      for (int j = 0; j < n; ++j) {
        if (where[static_cast<size_t>(j)] >= 0) continue;
        double d = cost(j);
        for (SpMat::InnerIterator it(a, j); it; ++it) d -= pi(it.row()) * it.value();
        double score = 0.0, sdir = 1.0;
        if (d < -settings.optimality_tol) {
          score = -d;
        } else if (is_free(j) && d > settings.optimality_tol) {
          score = d;
          sdir = -1.0;
        }
        if (score <= 0.0) continue;
        if (bland) {
          enter = j;
          dir = sdir;
          break;
        }
        if (score > best) {
          best = score;
          enter = j;
          dir = sdir;
        }
      }
      if (enter < 0) break;

      const Vector d = factor.ftran(column(enter));
      // Moving the entering variable by t changes basics by -t * dir * d.
      // Harris pass 1: largest step with relaxed bounds; pass 2: largest pivot within it.
      const double tol = settings.feasibility_tol;
      double theta_max = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const int bj = basis[static_cast<size_t>(i)];
        if (is_free(bj)) continue;
        const double di = dir * d(i);
        const bool fixed_zero = phase == 2 && bj >= n;  // artificial stuck in the basis
        if (di > 1e-11) {
          theta_max = std::min(theta_max, (std::max(x(bj), 0.0) + tol) / di);
        } else if (fixed_zero && di < -1e-11) {
          theta_max = std::min(theta_max, tol / -di);
        }
      }
      if (!std::isfinite(theta_max)) {
        if (phase == 1) throw std::runtime_error("phase one reported an unbounded ray");
        res.status = Status::Unbounded;
        res.iterations = iter;
        return res;
      }
      int leave = -1;
      double piv = 0.0;
      for (int i = 0; i < m; ++i) {
        const int bj = basis[static_cast<size_t>(i)];
        if (is_free(bj)) continue;
        const double di = dir * d(i);
        const bool fixed_zero = phase == 2 && bj >= n;
        double ratio;
        if (di > 1e-11) {
          ratio = std::max(x(bj), 0.0) / di;
        } else if (fixed_zero && di < -1e-11) {
          ratio = 0.0;
        } else {
          continue;
        }
        if (ratio <= theta_max && std::abs(di) > piv) {
          piv = std::abs(di);
          leave = i;
        }
      }
      if (leave < 0) throw std::runtime_error("ratio test found no pivot");
      const int out = basis[static_cast<size_t>(leave)];
      const double dl = dir * d(leave);
      double theta = dl > 0.0 ? std::max(x(out), 0.0) / dl : 0.0;
      if (out >= n && phase == 2) theta = 0.0;
      degenerate_run = theta <= tol ? degenerate_run + 1 : 0;

      for (int i = 0; i < m; ++i) x(basis[static_cast<size_t>(i)]) -= theta * dir * d(i);
      x(enter) = theta * dir;
      x(out) = 0.0;
      where[static_cast<size_t>(out)] = -1;
      where[static_cast<size_t>(enter)] = leave;
      basis[static_cast<size_t>(leave)] = enter;
      ++iter;
      if (factor.updates() + 1 >= static_cast<size_t>(settings.refactor_every)) {
        refactor();
      } else {
        factor.push(leave, d);
      }
    }
    if (phase == 1) {
      double infeas = 0.0;
      for (int i = 0; i < m; ++i) infeas += std::max(0.0, x(n + i));
      if (infeas > 1e-7 * (1.0 + b.lpNorm<1>())) {
        res.status = Status::Infeasible;
        res.iterations = iter;
        return res;
      }
      // Artificials out of the basis are never priced again.
      for (int i = 0; i < m; ++i)
        if (where[static_cast<size_t>(n + i)] < 0) x(n + i) = 0.0;
    } else {
      Vector cb(m);
      for (int i = 0; i < m; ++i) cb(i) = cost(basis[static_cast<size_t>(i)]);
      res.duals = sign.cwiseProduct(factor.btran(cb));
    }
  }
  res.status = Status::Optimal;
  res.iterations = iter;
  res.x = x.head(n).cwiseMax(-std::numeric_limits<double>::max());
  for (int j = 0; j < n; ++j)
    if (!is_free(j)) res.x(j) = std::max(0.0, res.x(j));
  res.objective = lp.c.dot(res.x);
  return res;
}

}  // namespace ccmssc::lp
