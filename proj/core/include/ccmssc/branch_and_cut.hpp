#pragma once

#include "ccmssc/cuts.hpp"
#include "ccmssc/data_model.hpp"
#include "ccmssc/heuristic.hpp"
#include "ccmssc/relaxations.hpp"
#include "ccmssc/safe_bounds.hpp"
#include "ccmssc/sdp_core.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ccmssc {

struct BncConfig {
  std::optional<RelaxationKind> relaxation;  // nullopt: VL when n <= 200 and k <= 4, else ML
  double epsilon = -1.0;       // percent; < 0 picks 0.01 for n < 500 and 0.1 otherwise
  double time_limit = 43200.0;  // seconds
  double sdp_tol = 1e-4;
  double sdp_tol_min = 1e-7;  // floor when a node is re-solved more tightly
  int sdp_max_iterations = 20000;
  int max_cuts = 100000;
  double cut_fraction = 0.10;
  double cut_tol = 1e-4;
  double cp_tol = 1e-4;   // relative bound progress needed to keep separating
  int max_cp_iterations = 50;
  double lp_time_limit = 120.0;
  int workers = 1;
  std::uint64_t seed = 0;
  bool root_only = false;
  bool heuristic_every_cp = false;
  int leaf_size = 6;  // nodes with at most max(k, leaf_size) super points are enumerated
};

RelaxationKind resolve_relaxation(const BncConfig& config, int n, int k);
double resolve_epsilon(const BncConfig& config, int n);

/// (UB - LB) / UB, 0 when UB == 0 (the objective is nonnegative).
double relative_gap(double lb, double ub);

struct BncNode {
  int id = 0;
  int parent = -1;
  int depth = 0;
  ShrinkMap map;
  std::vector<IndexPair> cannot;  // super pairs, first < second, sorted
  std::vector<Cut> cuts;
  double parent_lb = 0.0;
  std::shared_ptr<const sdp::WarmStart> warm;
};

/// Scores pairs by min over h of min{(Pi_h)_ij, ||(Pi_h)_i - (Pi_h)_j||^2};
/// argmax with lexicographic ties. Throws std::domain_error when every
/// score vanishes.
IndexPair branch_pair_vl(const VlPrimal& p);
/// Same with min{Z_ij, ||Z_i - Z_j||^2}.
IndexPair branch_pair_ml(const Matrix& z);
double branch_score_vl(const VlPrimal& p, int i, int j);
double branch_score_ml(const Matrix& z, int i, int j);

/// Used when the pair scores all vanish: a pair whose co-membership
/// s_ij is closest to 1/2, skipping cannot-linked pairs.
std::optional<IndexPair> fallback_pair(const Matrix& together, const std::vector<IndexPair>& cannot);

/// Row averaging of a warm start under merge_index(a, b). `lead` is the
/// number of leading non-point rows per block (1 for VL, k for ML).
sdp::WarmStart merge_warm_start(const sdp::WarmStart& ws, const std::vector<int>& new_id, int new_m, int lead);

/// Must-link child first. `pair` must be two distinct, not cannot-linked
/// super points; children get ids first_id and first_id + 1.
std::pair<BncNode, BncNode> make_children(const BncNode& node, IndexPair pair, RelaxationKind kind, int k, int first_id);

/// Exact minimum over assignments of super points; nullopt when infeasible.
struct LeafResult {
  std::vector<int> labels;  // per super point
  double objective;
};
std::optional<LeafResult> enumerate_node(const ReducedInstance& inst);

/// Certified bound of the root relaxation without cuts.
struct RootBound {
  SafeBound bound;
  double relaxation_value = 0.0;  // midpoint of the solver's primal and dual objectives
  int iterations = 0;
  sdp::Status status = sdp::Status::IterationLimit;
};
RootBound root_bound(const Dataset& data, const CardinalitySpec& cards, RelaxationKind kind, const sdp::Settings& settings);

struct Incumbent {
  AssignmentMatrix assignment;
  double objective = 0.0;
  int node_id = -1;
};

enum class SolveStatus { Optimal, GapReached, TimeLimit };
std::string to_string(SolveStatus s);
SolveStatus solve_status_from_string(const std::string& s);

struct NodeTrace {
  int id = 0;
  int parent = -1;
  int depth = 0;
  int super_points = 0;
  double gap0 = 0.0;    // after the first solve, against the UB known then
  int cp_iterations = 0;
  double gap_r = 0.0;   // when the node finished
  double lb = 0.0;
  double ub = 0.0;
  std::string bound_method;
  std::string outcome;  // pruned, infeasible, enumerated, branched, interrupted, open
};

struct SolveReport {
  double best_lb = 0.0;
  double best_ub = 0.0;
  double gap = 0.0;
  int nodes_processed = 0;
  int cp_iterations_total = 0;
  int cuts_added_total = 0;
  double wall_time = 0.0;
  SolveStatus status = SolveStatus::TimeLimit;
  std::optional<Incumbent> incumbent;
  std::string relaxation;
  double epsilon = 0.0;  // percent
  std::uint64_t seed = 0;
  std::vector<NodeTrace> trace;
};

/// Best-first branch-and-cut. Throws std::invalid_argument when the
/// cardinalities do not sum to n or the configuration is invalid.
SolveReport solve_ccmssc(const Dataset& data, const CardinalitySpec& cards, const BncConfig& config);

}  // namespace ccmssc
