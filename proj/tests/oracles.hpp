#pragma once

// Brute-force references used by the unit and acceptance tests. Nothing
// here calls into the solver code it is meant to check.

#include "ccmssc/data_model.hpp"
#include "ccmssc/relaxations.hpp"
#include "ccmssc/sdp_core.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using ccmssc::Matrix;
using ccmssc::Vector;

inline double sqdist(const Matrix& p, int i, int j) { return (p.row(i) - p.row(j)).squaredNorm(); }

/// Pairwise squared distances straight from the coordinates.
inline Matrix edm(const Matrix& p) {
  Matrix d(p.rows(), p.rows());
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.rows(); ++j) d(i, j) = sqdist(p, i, j);
  return d;
}

/// sum_h (1 / |h|) sum_{i<j in h} d_ij, the centroid objective without centroids.
inline double objective(const Matrix& p, const std::vector<int>& labels, int k) {
  std::vector<int> size(static_cast<size_t>(k), 0);
  for (int l : labels) ++size[static_cast<size_t>(l)];
  double f = 0.0;
  for (size_t i = 0; i < labels.size(); ++i)
    for (size_t j = i + 1; j < labels.size(); ++j)
      if (labels[i] == labels[j]) f += sqdist(p, static_cast<int>(i), static_cast<int>(j)) / size[static_cast<size_t>(labels[i])];
  return f;
}

/// Calls f(labels) for every label vector with the given cluster sizes
/// satisfying the pairwise constraints.
inline void for_each_assignment(int n, const std::vector<int>& cards, const std::vector<std::pair<int, int>>& must,
                                const std::vector<std::pair<int, int>>& cannot,
                                const std::function<void(const std::vector<int>&)>& f) {
  const int k = static_cast<int>(cards.size());
  std::vector<int> lab(static_cast<size_t>(n), 0), cnt(static_cast<size_t>(k), 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      for (int h = 0; h < k; ++h)
        if (cnt[static_cast<size_t>(h)] != cards[static_cast<size_t>(h)]) return;
      for (auto [a, b] : must)
        if (lab[static_cast<size_t>(a)] != lab[static_cast<size_t>(b)]) return;
      for (auto [a, b] : cannot)
        if (lab[static_cast<size_t>(a)] == lab[static_cast<size_t>(b)]) return;
      f(lab);
      return;
    }
    for (int h = 0; h < k; ++h) {
      if (cnt[static_cast<size_t>(h)] == cards[static_cast<size_t>(h)]) continue;
      lab[static_cast<size_t>(i)] = h;
      ++cnt[static_cast<size_t>(h)];
      rec(i + 1);
      --cnt[static_cast<size_t>(h)];
    }
  };
  rec(0);
}

struct Best {
  double value = std::numeric_limits<double>::infinity();
  std::vector<int> labels;
  long count = 0;
};

inline Best enumerate_optimum(const Matrix& p, const std::vector<int>& cards,
                              const std::vector<std::pair<int, int>>& must = {},
                              const std::vector<std::pair<int, int>>& cannot = {}) {
  Best b;
  for_each_assignment(static_cast<int>(p.rows()), cards, must, cannot, [&](const std::vector<int>& lab) {
    ++b.count;
    const double f = objective(p, lab, static_cast<int>(cards.size()));
    if (f < b.value) {
      b.value = f;
      b.labels = lab;
    }
  });
  return b;
}

/// Minimum of sum_i costs(i, label_i) by enumeration.
inline Best enumerate_assignment(const Matrix& costs, const std::vector<int>& cards,
                                 const std::vector<std::pair<int, int>>& must = {},
                                 const std::vector<std::pair<int, int>>& cannot = {}) {
  Best b;
  for_each_assignment(static_cast<int>(costs.rows()), cards, must, cannot, [&](const std::vector<int>& lab) {
    ++b.count;
    double f = 0.0;
    for (size_t i = 0; i < lab.size(); ++i) f += costs(static_cast<int>(i), lab[i]);
    if (f < b.value) {
      b.value = f;
      b.labels = lab;
    }
  });
  return b;
}

/// <A, X> evaluated entry by entry: off-diagonal entries stand for both halves.
inline double term_value(const std::vector<ccmssc::sdp::SymEntry>& terms, const std::vector<Matrix>& x) {
  double s = 0.0;
  for (const auto& t : terms) {
    const double v = x[static_cast<size_t>(t.block)](t.row, t.col);
    s += (t.row == t.col ? 1.0 : 2.0) * t.value * v;
  }
  return s;
}

/// Largest violation of any constraint of the problem at x (0 when feasible).
inline double max_violation(const ccmssc::sdp::Problem& p, const std::vector<Matrix>& x) {
  double worst = 0.0;
  for (const auto& e : p.equalities) worst = std::max(worst, std::abs(term_value(e.terms, x) - e.rhs));
  for (const auto& g : p.inequalities) worst = std::max(worst, term_value(g.terms, x) - g.rhs);
  for (size_t b = 0; b < x.size(); ++b) {
    for (int i = 0; i < x[b].rows(); ++i)
      for (int j = 0; j < x[b].cols(); ++j)
        if (p.mask[b](i, j) != 0.0) worst = std::max(worst, -x[b](i, j));
    Eigen::SelfAdjointEigenSolver<Matrix> es(x[b]);
    worst = std::max(worst, -es.eigenvalues().minCoeff());
  }
  return worst;
}

inline double objective_value(const ccmssc::sdp::Problem& p, const std::vector<Matrix>& x) {
  double f = p.offset;
  for (size_t b = 0; b < x.size(); ++b) f += p.cost[b].cwiseProduct(x[b]).sum();
  return f;
}

/// Super point labels -> VL blocks [1 pi^T; pi pi pi^T].
inline std::vector<Matrix> lift_vl(const std::vector<int>& super_labels, int k) {
  const int m = static_cast<int>(super_labels.size());
  std::vector<Matrix> y;
  for (int h = 0; h < k; ++h) {
    Vector v(m + 1);
    v(0) = 1.0;
    for (int i = 0; i < m; ++i) v(i + 1) = super_labels[static_cast<size_t>(i)] == h ? 1.0 : 0.0;
    y.push_back(v * v.transpose());
  }
  return y;
}

/// Super point labels -> ML block [C X^T; X X C^-1 X^T].
inline std::vector<Matrix> lift_ml(const std::vector<int>& super_labels, const std::vector<int>& cards) {
  const int m = static_cast<int>(super_labels.size()), k = static_cast<int>(cards.size());
  Matrix x = Matrix::Zero(m, k);
  for (int i = 0; i < m; ++i) x(i, super_labels[static_cast<size_t>(i)]) = 1.0;
  Matrix c = Matrix::Zero(k, k);
  for (int h = 0; h < k; ++h) c(h, h) = cards[static_cast<size_t>(h)];
  Matrix y(k + m, k + m);
  y.topLeftCorner(k, k) = c;
  y.bottomLeftCorner(m, k) = x;
  y.topRightCorner(k, m) = x.transpose();
  y.bottomRightCorner(m, m) = x * c.inverse() * x.transpose();
  return {y};
}

/// Exact partition matrix Z = X C^-1 X^T on points.
inline Matrix partition_z(const std::vector<int>& labels, const std::vector<int>& cards) {
  const int n = static_cast<int>(labels.size());
  Matrix z = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (labels[static_cast<size_t>(i)] == labels[static_cast<size_t>(j)])
        z(i, j) = 1.0 / cards[static_cast<size_t>(labels[static_cast<size_t>(i)])];
  return z;
}

/// Random cluster sizes >= 1 summing to n.
inline std::vector<int> random_cards(int n, int k, std::mt19937& rng) {
  std::vector<int> c(static_cast<size_t>(k), 1);
  for (int i = k; i < n; ++i) ++c[rng() % static_cast<unsigned>(k)];
  return c;
}

/// Gaussian blobs around k shifted centers in the plane.
inline Matrix random_points(int n, int d, int k, std::mt19937& rng, double spread = 1.5) {
  std::normal_distribution<double> g;
  Matrix p(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) p(i, j) = g(rng) + (j == 0 ? spread * (i % k) : 0.0);
  return p;
}

}  // namespace oracle
