#include "ccmssc/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ccmssc {

namespace {

// Keeps the most violated cuts without holding every violator at once.
class TopCuts {
 public:
  TopCuts(int max_found, double tol) : max_(static_cast<size_t>(std::max(max_found, 0))), tol_(tol) {}

  void offer(const Cut& c, double viol) {
    if (viol <= tol_ || max_ == 0) return;
    if (items_.size() >= max_ && viol < floor_) return;
    items_.push_back({c, viol});
    if (items_.size() >= 2 * max_ + 1024) trim();
  }

  std::vector<FoundCut> take() {
    trim();
    return std::move(items_);
  }

 private:
  static bool before(const FoundCut& a, const FoundCut& b) {
    if (a.violation != b.violation) return a.violation > b.violation;
    return a.cut < b.cut;
  }
  void trim() {
    std::sort(items_.begin(), items_.end(), before);
    if (items_.size() > max_) items_.resize(max_);
    if (items_.size() == max_) floor_ = items_.back().violation;
  }

  size_t max_;
  double tol_;
  double floor_ = -1.0;
  std::vector<FoundCut> items_;
};

}  // namespace

double cut_violation(const Cut& c, const VlPrimal& p) {
  const Vector& pi = p.pi[static_cast<size_t>(c.cluster)];
  const Matrix& P = p.big_pi[static_cast<size_t>(c.cluster)];
  switch (c.kind) {
    case CutKind::VlTriA: return pi(c.r) + pi(c.s) + pi(c.t) - P(c.r, c.s) - P(c.r, c.t) - P(c.s, c.t) - 1.0;
    case CutKind::VlTriB: return P(c.r, c.s) + P(c.r, c.t) - pi(c.r) - P(c.s, c.t);
    default: throw std::invalid_argument("matrix-lifting cut evaluated on a vector-lifting point");
  }
}

double cut_violation(const Cut& c, const MlPrimal& p) {
  const Matrix& Z = p.z;
  switch (c.kind) {
    case CutKind::MlTriA: return Z(c.r, c.s) - Z(c.r, c.r);
    case CutKind::MlTriB: return Z(c.r, c.s) + Z(c.r, c.t) - Z(c.r, c.r) - Z(c.s, c.t);
    default: throw std::invalid_argument("vector-lifting cut evaluated on a matrix-lifting point");
  }
}

std::vector<FoundCut> separate_vl(const VlPrimal& p, int max_found, double violation_tol) {
  TopCuts top(max_found, violation_tol);
  const int k = static_cast<int>(p.pi.size());
  for (int h = 0; h < k; ++h) {
    const Vector& pi = p.pi[static_cast<size_t>(h)];
    const Matrix& P = p.big_pi[static_cast<size_t>(h)];
    const int m = static_cast<int>(pi.size());
    for (int r = 0; r < m; ++r)
      for (int s = r + 1; s < m; ++s) {
        const double base = pi(r) + pi(s) - P(r, s) - 1.0;
        for (int t = s + 1; t < m; ++t) top.offer({CutKind::VlTriA, h, r, s, t}, base + pi(t) - P(r, t) - P(s, t));
      }
    for (int r = 0; r < m; ++r)
      for (int s = 0; s < m; ++s) {
        if (s == r) continue;
        const double base = P(r, s) - pi(r);
        for (int t = s + 1; t < m; ++t) {
          if (t == r) continue;
          top.offer({CutKind::VlTriB, h, r, s, t}, base + P(r, t) - P(s, t));
        }
      }
  }
  return top.take();
}

std::vector<FoundCut> separate_ml(const MlPrimal& p, int max_found, double violation_tol) {
  TopCuts top(max_found, violation_tol);
  const Matrix& Z = p.z;
  const int m = static_cast<int>(Z.rows());
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s)
      if (s != r) top.offer({CutKind::MlTriA, 0, r, s, 0}, Z(r, s) - Z(r, r));
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) {
      if (s == r) continue;
      const double base = Z(r, s) - Z(r, r);
      for (int t = s + 1; t < m; ++t) {
        if (t == r) continue;
        top.offer({CutKind::MlTriB, 0, r, s, t}, base + Z(r, t) - Z(s, t));
      }
    }
  return top.take();
}

std::vector<Cut> update_pool(const std::vector<Cut>& pool, const std::vector<double>& slacks, const Vector& multipliers,
                             const std::vector<FoundCut>& found, double add_fraction, double inactive_tol) {
  if (slacks.size() != pool.size() || static_cast<size_t>(multipliers.size()) != pool.size())
    throw std::invalid_argument("slacks and multipliers must align with the pool");
  if (add_fraction <= 0.0 || add_fraction > 1.0) throw std::invalid_argument("add_fraction must lie in (0, 1]");
  std::vector<Cut> out;
  std::set<Cut> seen;
  for (size_t q = 0; q < pool.size(); ++q) {
    const bool inactive = slacks[q] > inactive_tol && multipliers(static_cast<Eigen::Index>(q)) < inactive_tol;
    if (!inactive && seen.insert(pool[q]).second) out.push_back(pool[q]);
  }
  const auto quota = static_cast<size_t>(std::ceil(add_fraction * static_cast<double>(found.size()) - 1e-9));
  size_t added = 0;
  for (const auto& f : found) {
    if (added >= quota) break;
    if (seen.insert(f.cut).second) {
      out.push_back(f.cut);
      ++added;
    }
  }
  return out;
}

bool cp_should_stop(double prev_lb, double new_lb, int n_found, double rel_tol) {
  if (n_found == 0) return true;
  if (!std::isfinite(prev_lb)) return false;
  return (new_lb - prev_lb) / std::max(std::abs(new_lb), 1e-12) < rel_tol;
}

std::vector<Cut> remap_cuts(const std::vector<Cut>& cuts, const std::vector<int>& new_id) {
  std::vector<Cut> out;
  std::set<Cut> seen;
  for (const auto& c : cuts) {
    Cut d = c;
    d.r = new_id[static_cast<size_t>(c.r)];
    d.s = new_id[static_cast<size_t>(c.s)];
    const bool pair = c.kind == CutKind::MlTriA;
    if (!pair) d.t = new_id[static_cast<size_t>(c.t)];
    if (d.r == d.s || (!pair && (d.r == d.t || d.s == d.t))) continue;
    if (c.kind == CutKind::VlTriA) {
      int v[3] = {d.r, d.s, d.t};
      std::sort(v, v + 3);
      d.r = v[0];
      d.s = v[1];
      d.t = v[2];
    } else if (!pair && d.s > d.t) {
      std::swap(d.s, d.t);
    }
    if (seen.insert(d).second) out.push_back(d);
  }
  return out;
}

}  // namespace ccmssc
