#pragma once

#include "ccmssc/data_model.hpp"
#include "ccmssc/relaxations.hpp"

#include <optional>
#include <vector>

namespace ccmssc {

/// Exact min-cost assignment of points to clusters with cardinalities and
/// pairwise constraints: min sum_i costs(i, label_i). Ties resolve toward the
/// lexicographically smallest label vector when costs are uniform.
/// Returns nullopt when no feasible assignment exists.
std::optional<AssignmentMatrix> solve_assignment(const Matrix& costs, const CardinalitySpec& cards,
                                                 const PairwiseConstraints& pc);

/// Same on super points: costs is m x k (already summed over members),
/// weights are the super point sizes. Returns one label per super point.
std::optional<std::vector<int>> solve_assignment_shrunk(const Matrix& costs, const std::vector<int>& weights,
                                                        const CardinalitySpec& cards, const std::vector<IndexPair>& cannot);

/// Transportation relaxation (super points may split) used as the bound in
/// the exact search; costs are per unit of flow. forbidden(i, h) != 0 removes
/// arc i -> h. Returns the flow matrix or nullopt if the supplies cannot be
/// routed.
std::optional<Matrix> transportation(const Matrix& costs, const std::vector<int>& weights, const std::vector<int>& capacity,
                                     const Eigen::MatrixXi& forbidden);

/// Soft n x k assignment from a relaxation solution, expanded to points.
Matrix soft_from_vl(const VlPrimal& p, const ShrinkMap& map);
Matrix soft_from_ml(const MlPrimal& p, const ShrinkMap& map);

/// Nearest feasible assignment to xt in Frobenius norm.
std::optional<AssignmentMatrix> round_assignment(const Matrix& xt, const CardinalitySpec& cards, const PairwiseConstraints& pc);

struct KMeansResult {
  AssignmentMatrix best;
  double objective = 0.0;
  std::vector<double> history;  // true objective after each assignment step
  int iterations = 0;
};

/// Alternates exact constrained assignment and centroid updates from the
/// given k x d centers; returns the best iterate.
std::optional<KMeansResult> constrained_kmeans(const Dataset& data, const CardinalitySpec& cards, const Matrix& centers,
                                               const PairwiseConstraints& pc, int max_iterations = 50);

Matrix centers_of(const Dataset& data, const AssignmentMatrix& x);

}  // namespace ccmssc
