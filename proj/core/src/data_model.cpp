#include "ccmssc/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace ccmssc {

namespace {

std::vector<IndexPair> canonical_pairs(int n, std::vector<IndexPair> pairs, const char* what) {
  for (auto& p : pairs) {
    if (p.first < 0 || p.second < 0 || p.first >= n || p.second >= n)
      throw std::invalid_argument(std::string(what) + " pair index out of range");
    if (p.first == p.second) throw std::invalid_argument(std::string(what) + " pair joins a point to itself");
    if (p.first > p.second) std::swap(p.first, p.second);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

int find_root(std::vector<int>& parent, int i) {
  while (parent[static_cast<size_t>(i)] != i) {
    parent[static_cast<size_t>(i)] = parent[static_cast<size_t>(parent[static_cast<size_t>(i)])];
    i = parent[static_cast<size_t>(i)];
  }
  return i;
}

}  // namespace

Dataset::Dataset(Matrix points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1) throw std::invalid_argument("dataset must have at least one point and one feature");
  if (!points_.allFinite()) throw std::invalid_argument("dataset contains non-finite values");
}

Dataset Dataset::centered() const {
  Matrix p = points_;
  p.rowwise() -= p.colwise().mean();
  return Dataset(std::move(p));
}

CardinalitySpec::CardinalitySpec(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("at least two clusters are required");
  for (int c : sizes_)
    if (c < 1) throw std::invalid_argument("every cluster cardinality must be at least 1");
  total_ = std::accumulate(sizes_.begin(), sizes_.end(), 0);
}

CardinalitySpec CardinalitySpec::balanced(int n, int k) {
  if (k < 2 || n < k) throw std::invalid_argument("balanced cardinalities need 2 <= k <= n");
  if (n % k != 0)
    throw std::invalid_argument(std::to_string(n) + " points cannot be split into " + std::to_string(k) + " equal clusters");
  return CardinalitySpec(std::vector<int>(static_cast<size_t>(k), n / k));
}

int CardinalitySpec::max() const { return sizes_.empty() ? 0 : *std::max_element(sizes_.begin(), sizes_.end()); }

void CardinalitySpec::check_matches(int n) const {
  if (total_ != n)
    throw std::invalid_argument("cardinalities sum to " + std::to_string(total_) + " but the dataset has " + std::to_string(n) +
                                " points");
}

AssignmentMatrix::AssignmentMatrix(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
  for (int l : labels_)
    if (l < 0 || l >= k_) throw std::invalid_argument("assignment label out of range");
}

std::vector<int> AssignmentMatrix::counts() const {
  std::vector<int> c(static_cast<size_t>(k_), 0);
  for (int l : labels_) ++c[static_cast<size_t>(l)];
  return c;
}

Matrix AssignmentMatrix::dense() const {
  Matrix x = Matrix::Zero(size(), k_);
  for (int i = 0; i < size(); ++i) x(i, label(i)) = 1.0;
  return x;
}

bool AssignmentMatrix::respects(const CardinalitySpec& cards) const {
  return cards.k() == k_ && counts() == cards.sizes();
}

PairwiseConstraints::PairwiseConstraints(int n, std::vector<IndexPair> must, std::vector<IndexPair> cannot)
    : n_(n), must_(canonical_pairs(n, std::move(must), "must-link")), cannot_(canonical_pairs(n, std::move(cannot), "cannot-link")) {}

bool PairwiseConstraints::satisfied_by(const AssignmentMatrix& x) const {
  for (auto [a, b] : must_)
    if (x.label(a) != x.label(b)) return false;
  for (auto [a, b] : cannot_)
    if (x.label(a) == x.label(b)) return false;
  return true;
}

ShrinkMap::ShrinkMap(int n) : component_(static_cast<size_t>(n)) {
  std::iota(component_.begin(), component_.end(), 0);
  rebuild();
}

ShrinkMap::ShrinkMap(std::vector<int> component) : component_(std::move(component)) {
  int next = 0;
  for (int c : component_) {
    if (c < 0 || c > next) throw std::invalid_argument("shrink map ids must be dense and ordered by first member");
    if (c == next) ++next;
  }
  rebuild();
}

void ShrinkMap::rebuild() {
  int m = 0;
  for (int c : component_) m = std::max(m, c + 1);
  weights_.assign(static_cast<size_t>(m), 0);
  members_.assign(static_cast<size_t>(m), {});
  for (int i = 0; i < points(); ++i) {
    ++weights_[static_cast<size_t>(component_[static_cast<size_t>(i)])];
    members_[static_cast<size_t>(component_[static_cast<size_t>(i)])].push_back(i);
  }
}

Vector ShrinkMap::weight_vector() const {
  Vector e(size());
  for (int s = 0; s < size(); ++s) e(s) = weight(s);
  return e;
}

Matrix ShrinkMap::aggregation() const {
  Matrix t = Matrix::Zero(size(), points());
  for (int i = 0; i < points(); ++i) t(super_of(i), i) = 1.0;
  return t;
}

Matrix ShrinkMap::shrink(const Matrix& w) const {
  const int m = size();
  const int n = points();
  Matrix rows = Matrix::Zero(m, n);
  for (int i = 0; i < n; ++i) rows.row(super_of(i)) += w.row(i);
  Matrix out = Matrix::Zero(m, m);
  for (int i = 0; i < n; ++i) out.col(super_of(i)) += rows.col(i);
  return out;
}

std::vector<int> ShrinkMap::merge_index(int a, int b) const {
  if (a == b || a < 0 || b < 0 || a >= size() || b >= size()) throw std::invalid_argument("invalid super points to merge");
  if (a > b) std::swap(a, b);
  std::vector<int> id(static_cast<size_t>(size()));
  for (int s = 0; s < size(); ++s) id[static_cast<size_t>(s)] = s < b ? s : (s == b ? a : s - 1);
  return id;
}

ShrinkMap ShrinkMap::merged(int a, int b) const {
  auto id = merge_index(a, b);
  std::vector<int> comp(component_.size());
  for (size_t i = 0; i < comp.size(); ++i) comp[i] = id[static_cast<size_t>(component_[i])];
  return ShrinkMap(std::move(comp));
}

Matrix gram_from_points(const Dataset& data) { return data.points() * data.points().transpose(); }

Matrix edm_from_gram(const Matrix& gram) {
  const Vector d = gram.diagonal();
  const auto n = gram.rows();
  Matrix out = d * Vector::Ones(n).transpose() + Vector::Ones(n) * d.transpose() - 2.0 * gram;
  out.diagonal().setZero();
  return out;
}

double mssc_objective(const Matrix& gram, const AssignmentMatrix& x, const CardinalitySpec& cards) {
  if (!x.respects(cards)) throw std::invalid_argument("assignment does not match the cardinalities");
  double within = 0.0;
  // <W, X C^{-1} X^T> = sum_j (1/c_j) sum_{s,t in j} W_st
  for (int i = 0; i < x.size(); ++i)
    for (int l = 0; l < x.size(); ++l)
      if (x.label(i) == x.label(l)) within += gram(i, l) / cards[x.label(i)];
  return gram.trace() - within;
}

double mssc_objective_edm(const Matrix& edm, const AssignmentMatrix& x, const CardinalitySpec& cards) {
  if (!x.respects(cards)) throw std::invalid_argument("assignment does not match the cardinalities");
  double total = 0.0;
  for (int i = 0; i < x.size(); ++i)
    for (int l = 0; l < x.size(); ++l)
      if (x.label(i) == x.label(l)) total += edm(i, l) / cards[x.label(i)];
  return 0.5 * total;
}

double mssc_objective_points(const Dataset& data, const AssignmentMatrix& x) {
  const Matrix& p = data.points();
  Matrix centers = Matrix::Zero(x.k(), data.dim());
  std::vector<int> count(static_cast<size_t>(x.k()), 0);
  for (int i = 0; i < data.size(); ++i) {
    centers.row(x.label(i)) += p.row(i);
    ++count[static_cast<size_t>(x.label(i))];
  }
  for (int j = 0; j < x.k(); ++j)
    if (count[static_cast<size_t>(j)] > 0) centers.row(j) /= count[static_cast<size_t>(j)];
  double total = 0.0;
  for (int i = 0; i < data.size(); ++i) total += (p.row(i) - centers.row(x.label(i))).squaredNorm();
  return total;
}

ShrunkConstraints shrink_from_mustlinks(const PairwiseConstraints& pc) {
  const int n = pc.size();
  std::vector<int> parent(static_cast<size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  for (auto [a, b] : pc.must_links()) {
    int ra = find_root(parent, a), rb = find_root(parent, b);
    if (ra != rb) parent[static_cast<size_t>(std::max(ra, rb))] = std::min(ra, rb);
  }
  std::vector<int> comp(static_cast<size_t>(n), -1), root_id(static_cast<size_t>(n), -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    int r = find_root(parent, i);
    if (root_id[static_cast<size_t>(r)] < 0) root_id[static_cast<size_t>(r)] = next++;
    comp[static_cast<size_t>(i)] = root_id[static_cast<size_t>(r)];
  }
  ShrunkConstraints out{ShrinkMap(std::move(comp)), {}};
  for (auto [a, b] : pc.cannot_links()) {
    int sa = out.map.super_of(a), sb = out.map.super_of(b);
    if (sa == sb)
      throw InconsistentConstraints("cannot-link (" + std::to_string(a) + ", " + std::to_string(b) +
                                    ") lies inside a must-link component");
    out.cannot.emplace_back(std::min(sa, sb), std::max(sa, sb));
  }
  std::sort(out.cannot.begin(), out.cannot.end());
  out.cannot.erase(std::unique(out.cannot.begin(), out.cannot.end()), out.cannot.end());
  return out;
}

PairwiseConstraints expand_constraints(const ShrinkMap& map, const std::vector<IndexPair>& cannot) {
  std::vector<IndexPair> must, cl;
  for (int s = 0; s < map.size(); ++s) {
    const auto& mem = map.members(s);
    for (size_t t = 1; t < mem.size(); ++t) must.emplace_back(mem[0], mem[t]);
  }
  for (auto [a, b] : cannot) cl.emplace_back(map.members(a)[0], map.members(b)[0]);
  return PairwiseConstraints(map.points(), std::move(must), std::move(cl));
}

Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("cannot open data file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        size_t used = 0;
        double v = std::stod(cell, &used);
        if (cell.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
        vals.push_back(v);
      } catch (const std::exception&) {
        numeric = false;
      }
      if (!numeric) break;
    }
    if (!numeric) {
      if (rows.empty() && lineno == 1) continue;  // header
      throw MalformedData(path + ":" + std::to_string(lineno) + ": non-numeric value");
    }
    if (!rows.empty() && vals.size() != rows.front().size())
      throw MalformedData(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(rows.front().size()) +
                          " columns, found " + std::to_string(vals.size()));
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw MalformedData(path + ": no data rows");
  Matrix p(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  if (!p.allFinite()) throw MalformedData(path + ": non-finite value");
  return Dataset(std::move(p));
}

}  // namespace ccmssc
