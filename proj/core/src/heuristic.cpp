#include "ccmssc/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace ccmssc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Successive shortest paths on source-less bipartite network:
// super point i -> cluster h -> sink, supplies weights[i].
class FlowNetwork {
 public:
  FlowNetwork(int m, int k) : m_(m), k_(k), adj_(static_cast<size_t>(m + k + 1)) {}

  void add(int u, int v, int cap, double cost) {
    adj_[static_cast<size_t>(u)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({v, cap, cost});
    adj_[static_cast<size_t>(v)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({u, 0, -cost});
  }

  // Ships `amount` units out of `src`; false if the sink cannot absorb them.
  bool ship(int src, int amount) {
    const int nodes = m_ + k_ + 1, sink = m_ + k_;
    pot_.resize(static_cast<size_t>(nodes), 0.0);
    while (amount > 0) {
      std::vector<double> dist(static_cast<size_t>(nodes), kInf);
      std::vector<int> via(static_cast<size_t>(nodes), -1);
      std::vector<char> done(static_cast<size_t>(nodes), 0);
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      dist[static_cast<size_t>(src)] = 0.0;
      pq.push({0.0, src});
      while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (done[static_cast<size_t>(u)]) continue;
        done[static_cast<size_t>(u)] = 1;
        if (u == sink) break;
        for (int e : adj_[static_cast<size_t>(u)]) {
          const Edge& ed = edges_[static_cast<size_t>(e)];
          if (ed.cap <= 0 || done[static_cast<size_t>(ed.to)]) continue;
          const double rc = std::max(0.0, ed.cost + pot_[static_cast<size_t>(u)] - pot_[static_cast<size_t>(ed.to)]);
          if (d + rc < dist[static_cast<size_t>(ed.to)]) {
            dist[static_cast<size_t>(ed.to)] = d + rc;
            via[static_cast<size_t>(ed.to)] = e;
            pq.push({d + rc, ed.to});
          }
        }
      }
      if (!done[static_cast<size_t>(sink)]) return false;
      const double reach = dist[static_cast<size_t>(sink)];
      for (int v = 0; v < nodes; ++v) pot_[static_cast<size_t>(v)] += std::min(dist[static_cast<size_t>(v)], reach);
      int push = amount;
      for (int v = sink; v != src;) {
        const int e = via[static_cast<size_t>(v)];
        push = std::min(push, edges_[static_cast<size_t>(e)].cap);
        v = edges_[static_cast<size_t>(e ^ 1)].to;
      }
      for (int v = sink; v != src;) {
        const int e = via[static_cast<size_t>(v)];
        edges_[static_cast<size_t>(e)].cap -= push;
        edges_[static_cast<size_t>(e ^ 1)].cap += push;
        v = edges_[static_cast<size_t>(e ^ 1)].to;
      }
      amount -= push;
    }
    return true;
  }

  // Flow on arc i -> cluster h.
  Matrix flows() const {
    Matrix f = Matrix::Zero(m_, k_);
    for (int i = 0; i < m_; ++i)
      for (int e : adj_[static_cast<size_t>(i)]) {
        const Edge& ed = edges_[static_cast<size_t>(e)];
        if ((e & 1) == 0 && ed.to >= m_ && ed.to < m_ + k_) f(i, ed.to - m_) += edges_[static_cast<size_t>(e ^ 1)].cap;
      }
    return f;
  }

 private:
  struct Edge {
    int to;
    int cap;
    double cost;
  };
  int m_, k_;
  std::vector<std::vector<int>> adj_;
  std::vector<Edge> edges_;
  std::vector<double> pot_;
};

constexpr long kNodeLimit = 2'000'000;

}  // namespace

std::optional<Matrix> transportation(const Matrix& costs, const std::vector<int>& weights, const std::vector<int>& capacity,
                                     const Eigen::MatrixXi& forbidden) {
  const int m = static_cast<int>(costs.rows()), k = static_cast<int>(costs.cols());
  if (static_cast<int>(weights.size()) != m || static_cast<int>(capacity.size()) != k || forbidden.rows() != m ||
      forbidden.cols() != k)
    throw std::invalid_argument("transportation: dimensions disagree");
  FlowNetwork net(m, k);
  for (int i = 0; i < m; ++i) {
    // Row shifts keep every arc cost nonnegative; they do not change the argmin.
    double lo = kInf;
    for (int h = 0; h < k; ++h)
      if (!forbidden(i, h)) lo = std::min(lo, costs(i, h));
    if (!std::isfinite(lo)) return std::nullopt;
    for (int h = 0; h < k; ++h)
      if (!forbidden(i, h)) net.add(i, m + h, weights[static_cast<size_t>(i)], costs(i, h) - lo);
  }
  for (int h = 0; h < k; ++h) net.add(m + h, m + k, capacity[static_cast<size_t>(h)], 0.0);
  for (int i = 0; i < m; ++i)
    if (!net.ship(i, weights[static_cast<size_t>(i)])) return std::nullopt;
  return net.flows();
}

std::optional<std::vector<int>> solve_assignment_shrunk(const Matrix& costs, const std::vector<int>& weights,
                                                        const CardinalitySpec& cards, const std::vector<IndexPair>& cannot) {
  const int m = static_cast<int>(costs.rows()), k = cards.k();
  if (costs.cols() != k) throw std::invalid_argument("cost matrix needs one column per cluster");
  if (std::accumulate(weights.begin(), weights.end(), 0) != cards.total())
    throw std::invalid_argument("super point weights must sum to the total cardinality");

  // The network ships one unit per point, so arcs carry the per-member cost.
  Matrix unit = costs;
  for (int i = 0; i < m; ++i) {
    if (weights[static_cast<size_t>(i)] < 1) throw std::invalid_argument("super point weights must be positive");
    unit.row(i) /= weights[static_cast<size_t>(i)];
  }

  // Depth-first search over arc removals; the transportation optimum bounds
  // each node and is integral unless a super point splits.
  std::optional<std::vector<int>> best;
  double best_cost = kInf;
  std::vector<Eigen::MatrixXi> stack{Eigen::MatrixXi::Zero(m, k)};
  long nodes = 0;
  while (!stack.empty()) {
    if (++nodes > kNodeLimit) {
      if (best) break;
      throw std::runtime_error("assignment search exceeded its node limit");
    }
    const Eigen::MatrixXi forb = std::move(stack.back());
    stack.pop_back();
    const auto flow = transportation(unit, weights, cards.sizes(), forb);
    if (!flow) continue;
    const double lb = unit.cwiseProduct(*flow).sum();
    if (best && lb >= best_cost - 1e-12 * (1.0 + std::abs(best_cost))) continue;

    int split = -1;
    std::vector<int> labels(static_cast<size_t>(m), -1);
    for (int i = 0; i < m && split < 0; ++i)
      for (int h = 0; h < k; ++h) {
        const double f = (*flow)(i, h);
        if (f <= 0.5) continue;
        if (std::lround(f) == weights[static_cast<size_t>(i)]) {
          labels[static_cast<size_t>(i)] = h;
        } else {
          split = i;
        }
        break;
      }
    std::vector<Eigen::MatrixXi> children;
    if (split >= 0) {
      std::vector<int> order(static_cast<size_t>(k));
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return (*flow)(split, a) > (*flow)(split, b); });
      for (int h : order) {
        if (forb(split, h)) continue;
        Eigen::MatrixXi c = forb;
        c.row(split).setOnes();
        c(split, h) = 0;
        children.push_back(std::move(c));
      }
    } else {
      const IndexPair* clash = nullptr;
      for (const auto& p : cannot)
        if (labels[static_cast<size_t>(p.first)] == labels[static_cast<size_t>(p.second)]) {
          clash = &p;
          break;
        }
      if (!clash) {
        best = labels;
        best_cost = lb;
        continue;
      }
      const int h = labels[static_cast<size_t>(clash->first)];
      Eigen::MatrixXi a = forb, b = forb;
      b(clash->first, h) = 1;
      a(clash->second, h) = 1;
      children.push_back(std::move(a));
      children.push_back(std::move(b));
    }
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(std::move(*it));
  }
  return best;
}

std::optional<AssignmentMatrix> solve_assignment(const Matrix& costs, const CardinalitySpec& cards,
                                                 const PairwiseConstraints& pc) {
  const int n = static_cast<int>(costs.rows());
  cards.check_matches(n);
  if (pc.size() != 0 && pc.size() != n) throw std::invalid_argument("constraints refer to a different point count");
  const ShrunkConstraints sc = pc.size() == 0 ? ShrunkConstraints{ShrinkMap(n), {}} : shrink_from_mustlinks(pc);
  const Matrix super_costs = sc.map.aggregation() * costs;
  const auto labels = solve_assignment_shrunk(super_costs, sc.map.weights(), cards, sc.cannot);
  if (!labels) return std::nullopt;
  std::vector<int> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = (*labels)[static_cast<size_t>(sc.map.super_of(i))];
  return AssignmentMatrix(std::move(out), cards.k());
}

Matrix soft_from_vl(const VlPrimal& p, const ShrinkMap& map) {
  const int k = static_cast<int>(p.pi.size());
  Matrix xt(map.points(), k);
  for (int i = 0; i < map.points(); ++i)
    for (int h = 0; h < k; ++h) xt(i, h) = p.pi[static_cast<size_t>(h)](map.super_of(i));
  return xt;
}

Matrix soft_from_ml(const MlPrimal& p, const ShrinkMap& map) {
  Matrix xt(map.points(), p.x.cols());
  for (int i = 0; i < map.points(); ++i) xt.row(i) = p.x.row(map.super_of(i));
  return xt;
}

std::optional<AssignmentMatrix> round_assignment(const Matrix& xt, const CardinalitySpec& cards, const PairwiseConstraints& pc) {
  // ||X - Xt||^2 = const - 2 <X, Xt> for 0/1 rows with a single one.
  return solve_assignment(-xt, cards, pc);
}

Matrix centers_of(const Dataset& data, const AssignmentMatrix& x) {
  Matrix c = Matrix::Zero(x.k(), data.dim());
  const auto counts = x.counts();
  for (int i = 0; i < data.size(); ++i) c.row(x.label(i)) += data.points().row(i);
  for (int h = 0; h < x.k(); ++h)
    if (counts[static_cast<size_t>(h)] > 0) c.row(h) /= counts[static_cast<size_t>(h)];
  return c;
}

std::optional<KMeansResult> constrained_kmeans(const Dataset& data, const CardinalitySpec& cards, const Matrix& centers,
                                               const PairwiseConstraints& pc, int max_iterations) {
  if (centers.rows() != cards.k() || centers.cols() != data.dim()) throw std::invalid_argument("centers must be k x d");
  const int n = data.size(), k = cards.k();
  Matrix mu = centers;
  KMeansResult res;
  for (int it = 0; it < max_iterations; ++it) {
    Matrix costs(n, k);
    for (int h = 0; h < k; ++h) costs.col(h) = (data.points().rowwise() - mu.row(h)).rowwise().squaredNorm();
    const auto x = solve_assignment(costs, cards, pc);
    if (!x) return std::nullopt;
    const double obj = mssc_objective_points(data, *x);
    res.history.push_back(obj);
    res.iterations = it + 1;
    if (it == 0 || obj < res.objective) {
      res.best = *x;
      res.objective = obj;
    }
    const Matrix next = centers_of(data, *x);
    const bool still = (next - mu).cwiseAbs().maxCoeff() < 1e-9;
    mu = next;
    if (still) break;
  }
  return res;
}

}  // namespace ccmssc
