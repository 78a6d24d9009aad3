#include "ccmssc/branch_and_cut.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace ccmssc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

bool is_cannot(const std::vector<IndexPair>& cannot, int a, int b) {
  if (a > b) std::swap(a, b);
  return std::binary_search(cannot.begin(), cannot.end(), IndexPair{a, b});
}

// Super points whose weight fits no cluster make the node empty.
bool oversize(const ShrinkMap& map, const CardinalitySpec& cards) {
  const int cap = cards.max();
  return std::any_of(map.weights().begin(), map.weights().end(), [&](int w) { return w > cap; });
}

Matrix block_average(const Matrix& x, const Matrix& a) { return a * x * a.transpose(); }

}  // namespace

RelaxationKind resolve_relaxation(const BncConfig& config, int n, int k) {
  if (config.relaxation) return *config.relaxation;
  return (n <= 200 && k <= 4) ? RelaxationKind::VectorLifting : RelaxationKind::MatrixLifting;
}

double resolve_epsilon(const BncConfig& config, int n) {
  if (config.epsilon > 0.0) return config.epsilon;
  return n < 500 ? 0.01 : 0.1;
}

double relative_gap(double lb, double ub) {
  if (!std::isfinite(ub)) return kInf;
  if (ub <= 0.0) return 0.0;
  return std::max(0.0, (ub - lb) / ub);
}

double branch_score_vl(const VlPrimal& p, int i, int j) {
  double score = kInf;
  for (const auto& P : p.big_pi) score = std::min({score, P(i, j), (P.row(i) - P.row(j)).squaredNorm()});
  return score;
}

double branch_score_ml(const Matrix& z, int i, int j) { return std::min(z(i, j), (z.row(i) - z.row(j)).squaredNorm()); }

namespace {

template <class Score>
IndexPair argmax_pair(int m, Score score) {
  IndexPair best{-1, -1};
  double top = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double s = score(i, j);
      if (s > top) {
        top = s;
        best = {i, j};
      }
    }
  if (best.first < 0 || top <= 1e-12) throw std::domain_error("every branching score vanishes");
  return best;
}

}  // namespace

IndexPair branch_pair_vl(const VlPrimal& p) {
  const int m = p.pi.empty() ? 0 : static_cast<int>(p.pi.front().size());
  return argmax_pair(m, [&](int i, int j) { return branch_score_vl(p, i, j); });
}

IndexPair branch_pair_ml(const Matrix& z) {
  return argmax_pair(static_cast<int>(z.rows()), [&](int i, int j) { return branch_score_ml(z, i, j); });
}

std::optional<IndexPair> fallback_pair(const Matrix& together, const std::vector<IndexPair>& cannot) {
  std::optional<IndexPair> best;
  double top = -kInf;
  const int m = static_cast<int>(together.rows());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      if (is_cannot(cannot, i, j)) continue;
      const double t = std::clamp(together(i, j), 0.0, 1.0);
      const double s = std::min(t, 1.0 - t);
      if (s > top) {
        top = s;
        best = IndexPair{i, j};
      }
    }
  return best;
}

sdp::WarmStart merge_warm_start(const sdp::WarmStart& ws, const std::vector<int>& new_id, int new_m, int lead) {
  const int old_m = static_cast<int>(new_id.size());
  Matrix a = Matrix::Zero(lead + new_m, lead + old_m);
  a.topLeftCorner(lead, lead).setIdentity();
  std::vector<int> count(static_cast<size_t>(new_m), 0);
  for (int s = 0; s < old_m; ++s) ++count[static_cast<size_t>(new_id[static_cast<size_t>(s)])];
  for (int s = 0; s < old_m; ++s) {
    const int t = new_id[static_cast<size_t>(s)];
    a(lead + t, lead + s) = 1.0 / count[static_cast<size_t>(t)];
  }
  sdp::WarmStart out;
  out.sigma = ws.sigma;
  for (const auto& x : ws.x) out.x.push_back(block_average(x, a));
  for (const auto& s : ws.s) out.s.push_back(block_average(s, a));
  for (const auto& z : ws.z) out.z.push_back(block_average(z, a));
  return out;
}

std::pair<BncNode, BncNode> make_children(const BncNode& node, IndexPair pair, RelaxationKind kind, int k, int first_id) {
  auto [a, b] = pair;
  if (a > b) std::swap(a, b);
  if (a == b || a < 0 || b >= node.map.size()) throw std::invalid_argument("branching pair must be two distinct super points");
  if (is_cannot(node.cannot, a, b)) throw std::invalid_argument("branching pair is already cannot-linked");

  BncNode must;
  must.id = first_id;
  must.parent = node.id;
  must.depth = node.depth + 1;
  must.map = node.map.merged(a, b);
  must.parent_lb = node.parent_lb;
  const auto id = node.map.merge_index(a, b);
  std::set<IndexPair> cl;
  for (auto [p, q] : node.cannot) {
    int u = id[static_cast<size_t>(p)], v = id[static_cast<size_t>(q)];
    if (u > v) std::swap(u, v);
    cl.insert({u, v});
  }
  must.cannot.assign(cl.begin(), cl.end());
  must.cuts = remap_cuts(node.cuts, id);
  if (node.warm) {
    const int lead = kind == RelaxationKind::VectorLifting ? 1 : k;
    must.warm = std::make_shared<sdp::WarmStart>(merge_warm_start(*node.warm, id, must.map.size(), lead));
  }

  BncNode cannot;
  cannot.id = first_id + 1;
  cannot.parent = node.id;
  cannot.depth = node.depth + 1;
  cannot.map = node.map;
  cannot.cannot = node.cannot;
  cannot.cannot.insert(std::upper_bound(cannot.cannot.begin(), cannot.cannot.end(), IndexPair{a, b}), IndexPair{a, b});
  cannot.cuts = node.cuts;
  cannot.parent_lb = node.parent_lb;
  cannot.warm = node.warm;
  return {std::move(must), std::move(cannot)};
}

std::optional<LeafResult> enumerate_node(const ReducedInstance& inst) {
  const int m = inst.size(), k = inst.cards.k();
  std::vector<std::vector<int>> forbid(static_cast<size_t>(m));  // earlier cannot partners
  for (auto [a, b] : inst.cannot) forbid[static_cast<size_t>(std::max(a, b))].push_back(std::min(a, b));
  std::vector<int> labels(static_cast<size_t>(m), -1), room(inst.cards.sizes());
  std::optional<LeafResult> best;
  // within[h] accumulates sum_{s,t in h} gram_st incrementally.
  std::vector<double> within(static_cast<size_t>(k), 0.0);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == m) {
      double f = inst.trace;
      for (int h = 0; h < k; ++h) f -= within[static_cast<size_t>(h)] / inst.cards[h];
      if (!best || f < best->objective) best = LeafResult{labels, f};
      return;
    }
    const int w = inst.weights[static_cast<size_t>(i)];
    for (int h = 0; h < k; ++h) {
      if (room[static_cast<size_t>(h)] < w) continue;
      bool clash = false;
      for (int p : forbid[static_cast<size_t>(i)]) clash = clash || labels[static_cast<size_t>(p)] == h;
      if (clash) continue;
      double add = inst.gram(i, i);
      for (int s = 0; s < i; ++s)
        if (labels[static_cast<size_t>(s)] == h) add += 2.0 * inst.gram(i, s);
      labels[static_cast<size_t>(i)] = h;
      room[static_cast<size_t>(h)] -= w;
      within[static_cast<size_t>(h)] += add;
      self(self, i + 1);
      within[static_cast<size_t>(h)] -= add;
      room[static_cast<size_t>(h)] += w;
      labels[static_cast<size_t>(i)] = -1;
    }
  };
  rec(rec, 0);
  return best;
}

RootBound root_bound(const Dataset& data, const CardinalitySpec& cards, RelaxationKind kind, const sdp::Settings& settings) {
  cards.check_matches(data.size());
  const Matrix gram = gram_from_points(data.centered());
  const ReducedInstance inst = ReducedInstance::root(gram, cards);
  Relaxation rel;
  if (kind == RelaxationKind::PengWei) {
    rel = build_pw(gram, cards.k());
  } else if (kind == RelaxationKind::AminiLevina) {
    rel = build_al(gram, cards.k());
  } else {
    rel = build(kind, inst);
  }
  const sdp::Solution sol = solve_relaxation(rel, settings);
  const auto caps = eig_caps(rel, cards);
  RootBound out;
  out.iterations = sol.iterations;
  out.status = sol.status;
  out.relaxation_value = 0.5 * (sol.primal_objective + sol.dual_objective);
  const double plain = std::max(jansson_bound(rel.problem, sol.dual, caps), jansson_bound_absorbed(rel.problem, sol.dual, caps));
  SafeBound b{plain, BoundMethod::ErrorBound, 0.0};
  if (kind == RelaxationKind::VectorLifting) {
    b = best_safe_bound(b, error_bound_vl(inst, {}, extract_vl_dual(rel, sol.dual)));
  } else if (kind == RelaxationKind::MatrixLifting) {
    b = best_safe_bound(b, error_bound_ml(inst, {}, extract_ml_dual(rel, sol.dual)));
  }
  if (!std::isfinite(b.value)) b = SafeBound{-kInf, BoundMethod::MinusInfinity, 0.0};
  out.bound = best_safe_bound(b, lp_dual_repair(rel, sol.dual, caps));
  return out;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::GapReached: return "gap_reached";
    case SolveStatus::TimeLimit: return "time_limit";
  }
  return "time_limit";
}

SolveStatus solve_status_from_string(const std::string& s) {
  if (s == "optimal") return SolveStatus::Optimal;
  if (s == "gap_reached") return SolveStatus::GapReached;
  if (s == "time_limit") return SolveStatus::TimeLimit;
  throw std::invalid_argument("unknown solve status: " + s);
}

namespace {

struct NodeOutcome {
  double lb = 0.0;
  bool closed = false;  // pruned, infeasible or enumerated
  std::vector<BncNode> children;
  NodeTrace trace;
  int cuts_added = 0;
};

class Search {
 public:
  Search(const Dataset& data, const CardinalitySpec& cards, const BncConfig& config)
      : data_(data.centered()),
        cards_(cards),
        config_(config),
        gram_(gram_from_points(data_)),
        kind_(resolve_relaxation(config, data.size(), cards.k())),
        eps_(resolve_epsilon(config, data.size()) / 100.0),
        start_(Clock::now()) {}

  SolveReport run();

 private:
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
  double remaining() const { return config_.time_limit - elapsed(); }
  bool out_of_time() const { return remaining() <= 0.0; }

  double upper() {
    std::lock_guard<std::mutex> lock(mu_);
    return best_ ? best_->objective : kInf;
  }
  bool prunable(double lb) { return relative_gap(lb, upper()) <= eps_; }

  void offer(const AssignmentMatrix& x, int node_id) {
    if (!x.respects(cards_)) return;
    const double f = mssc_objective_points(data_, x);
    std::lock_guard<std::mutex> lock(mu_);
    if (!best_ || f < best_->objective) best_ = Incumbent{x, f, node_id};
  }

  void run_heuristic(const Matrix& soft, const PairwiseConstraints& pc, int node_id);
  NodeOutcome process(const BncNode& node);
  void worker();

  Dataset data_;
  CardinalitySpec cards_;
  BncConfig config_;
  Matrix gram_;
  RelaxationKind kind_;
  double eps_;
  Clock::time_point start_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::optional<Incumbent> best_;
  // Open nodes keyed by (inherited LB, id).
  std::map<std::pair<double, int>, BncNode> open_;
  std::multiset<double> active_lbs_;
  int active_ = 0;
  int next_id_ = 1;
  bool stop_ = false;
  double closed_lb_ = kInf;
  int nodes_ = 0;
  int cp_total_ = 0;
  int cuts_total_ = 0;
  std::vector<NodeTrace> trace_;
};

void Search::run_heuristic(const Matrix& soft, const PairwiseConstraints& pc, int node_id) {
  try {
    const auto rounded = round_assignment(soft, cards_, pc);
    if (!rounded) return;
    offer(*rounded, node_id);
    const auto km = constrained_kmeans(data_, cards_, centers_of(data_, *rounded), pc);
    if (km) offer(km->best, node_id);
  } catch (const std::runtime_error&) {
    // The assignment search gave up; the node keeps its bound regardless.
  }
}

NodeOutcome Search::process(const BncNode& node) {
  NodeOutcome out;
  NodeTrace& tr = out.trace;
  tr.id = node.id;
  tr.parent = node.parent;
  tr.depth = node.depth;
  tr.super_points = node.map.size();
  out.lb = node.parent_lb;
  const int k = cards_.k();
  auto finish = [&](const char* outcome, bool closed) {
    tr.outcome = outcome;
    tr.lb = out.lb;
    tr.ub = upper();
    tr.gap_r = relative_gap(out.lb, tr.ub);
    out.closed = closed;
    return out;
  };

  if (oversize(node.map, cards_)) {
    out.lb = kInf;
    tr.gap0 = 0.0;
    return finish("infeasible", true);
  }
  ReducedInstance inst = ReducedInstance::from(gram_, node.map, node.cannot, cards_);
  const int m = inst.size();
  try {
    if (!solve_assignment_shrunk(Matrix::Zero(m, k), inst.weights, cards_, inst.cannot)) {
      out.lb = kInf;
      return finish("infeasible", true);
    }
  } catch (const std::runtime_error&) {
    // Undecided feasibility: treat the node as open.
  }
  if (prunable(out.lb)) {
    tr.gap0 = relative_gap(out.lb, upper());
    return finish("pruned", true);
  }

  if (m <= std::max(k, config_.leaf_size)) {
    const auto leaf = enumerate_node(inst);
    if (!leaf) {
      out.lb = kInf;
      return finish("infeasible", true);
    }
    std::vector<int> labels(static_cast<size_t>(node.map.points()));
    for (int i = 0; i < node.map.points(); ++i) labels[static_cast<size_t>(i)] = leaf->labels[static_cast<size_t>(node.map.super_of(i))];
    offer(AssignmentMatrix(std::move(labels), k), node.id);
    out.lb = std::max(out.lb, leaf->objective);
    tr.gap0 = relative_gap(out.lb, upper());
    tr.bound_method = "enumeration";
    return finish("enumerated", true);
  }

  const PairwiseConstraints pc = expand_constraints(node.map, node.cannot);
  std::vector<Cut> cuts = node.cuts;
  std::shared_ptr<const sdp::WarmStart> warm = node.warm;
  double tol = config_.sdp_tol;
  double prev_lb = -kInf;
  Matrix soft, together;
  VlPrimal vlp;
  MlPrimal mlp;
  bool have_primal = false;
  bool interrupted = false;
  std::shared_ptr<const sdp::WarmStart> last_warm;
  double relaxation_value = kInf;
  Vector multipliers;

  // Solves the current relaxation and certifies a bound.
  auto bound_once = [&]() {
    const Relaxation rel = build(kind_, inst, cuts);
    sdp::Settings st;
    st.tol = tol;
    st.max_iterations = config_.sdp_max_iterations;
    st.time_limit = std::max(remaining(), 1e-3);
    const auto t0 = Clock::now();
    sdp::Solution sol = solve_relaxation(rel, st, warm.get());
    const double sdp_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (sol.status == sdp::Status::TimeLimit) interrupted = true;
    const auto caps = eig_caps(rel, cards_);
    SafeBound b = kind_ == RelaxationKind::VectorLifting ? error_bound_vl(inst, cuts, extract_vl_dual(rel, sol.dual))
                                                         : error_bound_ml(inst, cuts, extract_ml_dual(rel, sol.dual));
    const double absorbed = jansson_bound_absorbed(rel.problem, sol.dual, caps);
    if (std::isfinite(absorbed) && absorbed > b.value) b = SafeBound{absorbed, BoundMethod::ErrorBound, b.perturbation};
    if (!prunable(b.value)) {
      LpRepairSettings ls;
      // The repair LP gets about as long as the solve it repairs.
      ls.time_limit = std::min({config_.lp_time_limit, std::max(1.0, sdp_seconds), std::max(remaining(), 1e-3)});
      b = best_safe_bound(b, lp_dual_repair(rel, sol.dual, caps, ls));
    }
    if (std::isfinite(b.value) && b.value > out.lb) {
      out.lb = std::max(0.0, b.value);
      tr.bound_method = to_string(b.method);
    }
    if (tr.bound_method.empty()) tr.bound_method = "inherited";

    if (kind_ == RelaxationKind::VectorLifting) {
      vlp = extract_vl(rel, sol.x);
      soft = soft_from_vl(vlp, node.map);
      together = Matrix::Zero(m, m);
      for (const auto& P : vlp.big_pi) together += P;
    } else {
      mlp = extract_ml(rel, sol.x);
      soft = soft_from_ml(mlp, node.map);
      together = mlp.x * mlp.x.transpose();
    }
    have_primal = true;
    relaxation_value = 0.5 * (sol.primal_objective + sol.dual_objective);
    last_warm = std::make_shared<sdp::WarmStart>(sdp::warm_start_from(sol));
    warm = last_warm;
    multipliers = sol.dual.w.tail(static_cast<Eigen::Index>(rel.cuts.size()));
  };

  try {
    bound_once();
    if (!std::isfinite(upper())) run_heuristic(soft, pc, node.id);
    tr.gap0 = relative_gap(out.lb, upper());
    while (!prunable(out.lb) && !interrupted && tr.cp_iterations < config_.max_cp_iterations && !out_of_time()) {
      std::vector<FoundCut> found = kind_ == RelaxationKind::VectorLifting
                                        ? separate_vl(vlp, config_.max_cuts, config_.cut_tol)
                                        : separate_ml(mlp, config_.max_cuts, config_.cut_tol);
      if (tr.cp_iterations > 0 && cp_should_stop(prev_lb, out.lb, static_cast<int>(found.size()), config_.cp_tol)) break;
      if (found.empty()) break;
      std::vector<double> slacks(cuts.size());
      for (size_t q = 0; q < cuts.size(); ++q)
        slacks[q] = kind_ == RelaxationKind::VectorLifting ? -cut_violation(cuts[q], vlp) : -cut_violation(cuts[q], mlp);
      std::set<Cut> had(cuts.begin(), cuts.end());
      cuts = update_pool(cuts, slacks, multipliers, found, config_.cut_fraction, config_.cut_tol);
      for (const auto& c : cuts) out.cuts_added += had.count(c) ? 0 : 1;
      prev_lb = out.lb;
      ++tr.cp_iterations;
      bound_once();
      if (config_.heuristic_every_cp) run_heuristic(soft, pc, node.id);
    }
    // Tighten the solve when the relaxation value would close the gap but
    // the certified bound does not yet.
    while (!prunable(out.lb) && !interrupted && !out_of_time() && tol / 10.0 >= config_.sdp_tol_min * (1 - 1e-12) &&
           prunable(relaxation_value)) {
      tol /= 10.0;
      bound_once();
    }
  } catch (const std::exception&) {
    // Subsolver trouble: keep the inherited bound and branch.
  }

  if (have_primal) run_heuristic(soft, pc, node.id);
  if (prunable(out.lb)) return finish("pruned", true);
  if (interrupted || out_of_time()) {
    out.children.push_back(node);
    out.children.back().parent_lb = out.lb;
    return finish("interrupted", false);
  }
  if (config_.root_only) return finish("open", false);

  std::optional<IndexPair> pair;
  if (have_primal) {
    try {
      pair = kind_ == RelaxationKind::VectorLifting ? branch_pair_vl(vlp) : branch_pair_ml(mlp.z);
      if (is_cannot(node.cannot, pair->first, pair->second)) pair.reset();
    } catch (const std::domain_error&) {
    }
    if (!pair) pair = fallback_pair(together, node.cannot);
  } else {
    pair = fallback_pair(Matrix::Constant(m, m, 0.5), node.cannot);
  }
  if (!pair) {
    // Every pair is cannot-linked yet m exceeds the leaf size: no feasible point.
    out.lb = kInf;
    return finish("infeasible", true);
  }
  BncNode parent = node;
  parent.cuts = cuts;
  parent.parent_lb = out.lb;
  parent.warm = last_warm;
  int first;
  {
    std::lock_guard<std::mutex> lock(mu_);
    first = next_id_;
    next_id_ += 2;
  }
  auto [a, b] = make_children(parent, *pair, kind_, k, first);
  out.children.push_back(std::move(a));
  out.children.push_back(std::move(b));
  return finish("branched", false);
}

void Search::worker() {
  std::unique_lock<std::mutex> lock(mu_);
  while (true) {
    cv_.wait(lock, [&] { return stop_ || !open_.empty() || active_ == 0; });
    if (stop_ || (open_.empty() && active_ == 0)) break;
    if (out_of_time()) {
      stop_ = true;
      break;
    }
    // Global bound over everything not yet closed.
    double global = closed_lb_;
    if (!open_.empty()) global = std::min(global, open_.begin()->first.first);
    if (!active_lbs_.empty()) global = std::min(global, *active_lbs_.begin());
    const double ub = best_ ? best_->objective : kInf;
    if (!open_.empty() && relative_gap(global, ub) <= eps_) {
      stop_ = true;
      break;
    }
    auto it = open_.begin();
    BncNode node = std::move(it->second);
    open_.erase(it);
    const auto slot = active_lbs_.insert(node.parent_lb);
    ++active_;
    lock.unlock();

    NodeOutcome res = process(node);

    lock.lock();
    --active_;
    active_lbs_.erase(slot);
    ++nodes_;
    cp_total_ += res.trace.cp_iterations;
    cuts_total_ += res.cuts_added;
    trace_.push_back(res.trace);
    if (res.closed) closed_lb_ = std::min(closed_lb_, res.lb);
    for (auto& c : res.children) {
      if (res.trace.outcome == "open") break;
      const std::pair<double, int> key{c.parent_lb, c.id};
      open_.emplace(key, std::move(c));
    }
    if (res.trace.outcome == "open") closed_lb_ = std::min(closed_lb_, res.lb);
    if (config_.root_only) stop_ = true;
    cv_.notify_all();
  }
  cv_.notify_all();
}

SolveReport Search::run() {
  BncNode root;
  root.map = ShrinkMap(data_.size());
  open_.emplace(std::pair<double, int>{0.0, 0}, std::move(root));
  const int workers = std::max(1, config_.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back([this] { worker(); });
    for (auto& t : pool) t.join();
  }

  SolveReport rep;
  rep.relaxation = to_string(kind_);
  rep.epsilon = eps_ * 100.0;
  rep.seed = config_.seed;
  rep.nodes_processed = nodes_;
  rep.cp_iterations_total = cp_total_;
  rep.cuts_added_total = cuts_total_;
  rep.trace = trace_;
  double lb = closed_lb_;
  for (const auto& [key, node] : open_) lb = std::min(lb, key.first);
  if (best_) {
    // Objective recomputed on the caller's coordinates, not the centered copy.
    Incumbent inc = *best_;
    rep.incumbent = inc;
    rep.best_ub = inc.objective;
  } else {
    rep.best_ub = kInf;
  }
  rep.best_lb = std::min(std::max(lb, 0.0), rep.best_ub);
  rep.gap = relative_gap(rep.best_lb, rep.best_ub);
  if (open_.empty() && !config_.root_only) {
    rep.status = SolveStatus::Optimal;
  } else if (rep.gap <= eps_) {
    rep.status = SolveStatus::GapReached;
  } else {
    rep.status = SolveStatus::TimeLimit;
  }
  rep.wall_time = elapsed();
  return rep;
}

}  // namespace

SolveReport solve_ccmssc(const Dataset& data, const CardinalitySpec& cards, const BncConfig& config) {
  cards.check_matches(data.size());
  if (config.workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (config.sdp_tol <= 0.0 || config.cut_tol <= 0.0 || config.cut_fraction <= 0.0 || config.cut_fraction > 1.0 ||
      config.cp_tol <= 0.0 || config.max_cuts < 0)
    throw std::invalid_argument("tolerances must be positive and the cut fraction in (0, 1]");
  const auto kind = resolve_relaxation(config, data.size(), cards.k());
  if (kind != RelaxationKind::VectorLifting && kind != RelaxationKind::MatrixLifting)
    throw std::invalid_argument("branch-and-cut runs on the vl or ml relaxation");
  Search search(data, cards, config);
  SolveReport rep = search.run();
  if (rep.incumbent) {
    rep.incumbent->objective = mssc_objective_points(data, rep.incumbent->assignment);
    rep.best_ub = rep.incumbent->objective;
    rep.best_lb = std::min(rep.best_lb, rep.best_ub);
    rep.gap = relative_gap(rep.best_lb, rep.best_ub);
  }
  return rep;
}

}  // namespace ccmssc
