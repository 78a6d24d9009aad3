#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ccmssc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when the pairwise constraints cannot be satisfied together.
class InconsistentConstraints : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FileNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// n points in R^d, one per row. n >= 1, d >= 1, all entries finite.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(Matrix points);

  const Matrix& points() const { return points_; }
  int size() const { return static_cast<int>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }

  /// Copy with the column means subtracted. Squared distances are unchanged.
  Dataset centered() const;

 private:
  Matrix points_;
};

/// Desired cluster sizes; every c_j >= 1 and k >= 2.
class CardinalitySpec {
 public:
  CardinalitySpec() = default;
  explicit CardinalitySpec(std::vector<int> sizes);

  /// c_j = n / k; throws std::invalid_argument unless k divides n.
  static CardinalitySpec balanced(int n, int k);

  int k() const { return static_cast<int>(sizes_.size()); }
  int total() const { return total_; }
  int operator[](int j) const { return sizes_[static_cast<size_t>(j)]; }
  int max() const;
  const std::vector<int>& sizes() const { return sizes_; }
  /// Throws std::invalid_argument unless total() == n.
  void check_matches(int n) const;

 private:
  std::vector<int> sizes_;
  int total_ = 0;
};

/// Hard assignment stored as one label per point. Labels lie in [0, k).
class AssignmentMatrix {
 public:
  AssignmentMatrix() = default;
  AssignmentMatrix(std::vector<int> labels, int k);

  int size() const { return static_cast<int>(labels_.size()); }
  int k() const { return k_; }
  int label(int i) const { return labels_[static_cast<size_t>(i)]; }
  const std::vector<int>& labels() const { return labels_; }
  std::vector<int> counts() const;
  /// Dense n x k 0/1 matrix.
  Matrix dense() const;
  bool respects(const CardinalitySpec& cards) const;

 private:
  std::vector<int> labels_;
  int k_ = 0;
};

using IndexPair = std::pair<int, int>;

/// Must-link and cannot-link pairs on point indices. Pairs are stored with
/// first < second, sorted and deduplicated.
class PairwiseConstraints {
 public:
  PairwiseConstraints() = default;
  PairwiseConstraints(int n, std::vector<IndexPair> must, std::vector<IndexPair> cannot);

  int size() const { return n_; }
  const std::vector<IndexPair>& must_links() const { return must_; }
  const std::vector<IndexPair>& cannot_links() const { return cannot_; }
  bool empty() const { return must_.empty() && cannot_.empty(); }
  bool satisfied_by(const AssignmentMatrix& x) const;

 private:
  int n_ = 0;
  std::vector<IndexPair> must_;
  std::vector<IndexPair> cannot_;
};

/// Partition of the n points into m super points (must-link components).
/// Super point ids are ordered by their smallest member.
class ShrinkMap {
 public:
  ShrinkMap() = default;
  /// Identity map on n points.
  explicit ShrinkMap(int n);
  /// component[i] is the super point of i; ids must be dense and first
  /// appear in increasing order.
  explicit ShrinkMap(std::vector<int> component);

  int points() const { return static_cast<int>(component_.size()); }
  int size() const { return static_cast<int>(weights_.size()); }
  int super_of(int i) const { return component_[static_cast<size_t>(i)]; }
  int weight(int s) const { return weights_[static_cast<size_t>(s)]; }
  const std::vector<int>& component() const { return component_; }
  const std::vector<int>& weights() const { return weights_; }
  Vector weight_vector() const;
  const std::vector<int>& members(int s) const { return members_[static_cast<size_t>(s)]; }
  /// m x n 0/1 aggregation matrix T.
  Matrix aggregation() const;
  /// T W T^T.
  Matrix shrink(const Matrix& w) const;
  /// Map obtained by merging super points a and b (a != b).
  ShrinkMap merged(int a, int b) const;
  /// new_id[s] for every old super point s under merged(a, b).
  std::vector<int> merge_index(int a, int b) const;

 private:
  void rebuild();

  std::vector<int> component_;
  std::vector<int> weights_;
  std::vector<std::vector<int>> members_;
};

/// Must-links collapsed into a ShrinkMap; cannot-links rewritten on super points.
struct ShrunkConstraints {
  ShrinkMap map;
  std::vector<IndexPair> cannot;
};

Matrix gram_from_points(const Dataset& data);
/// D = diag(W) 1^T + 1 diag(W)^T - 2 W.
Matrix edm_from_gram(const Matrix& gram);

/// tr(W - W X C^{-1} X^T); throws if x does not respect cards.
double mssc_objective(const Matrix& gram, const AssignmentMatrix& x, const CardinalitySpec& cards);
/// 1/2 sum_j (1/c_j) sum_{s,t} d_st x_sj x_tj.
double mssc_objective_edm(const Matrix& edm, const AssignmentMatrix& x, const CardinalitySpec& cards);
/// Direct centroid form; the reference used for reported values.
double mssc_objective_points(const Dataset& data, const AssignmentMatrix& x);

/// Throws InconsistentConstraints if a cannot-link joins two points of the
/// same must-link component.
ShrunkConstraints shrink_from_mustlinks(const PairwiseConstraints& pc);

/// Expand a super point cannot-link list back to point pairs (one pair per
/// super pair, using the smallest members).
PairwiseConstraints expand_constraints(const ShrinkMap& map, const std::vector<IndexPair>& cannot);

/// Reads a numeric CSV. A first row that does not parse as numbers is a header.
Dataset read_csv(const std::string& path);

}  // namespace ccmssc
