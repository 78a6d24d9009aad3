#include "ccmssc/branch_and_cut.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace ccmssc;

namespace {

std::vector<IndexPair> must_pairs(const ShrinkMap& map) {
  std::vector<IndexPair> out;
  for (int s = 0; s < map.size(); ++s)
    for (size_t q = 1; q < map.members(s).size(); ++q) out.push_back({map.members(s)[0], map.members(s)[q]});
  return out;
}

std::set<std::vector<int>> feasible_set(const BncNode& node, const std::vector<int>& cards) {
  std::set<std::vector<int>> out;
  const auto cl = expand_constraints(node.map, node.cannot).cannot_links();
  oracle::for_each_assignment(node.map.points(), cards, must_pairs(node.map), cl,
                              [&](const std::vector<int>& lab) { out.insert(lab); });
  return out;
}

BncConfig exact_config(RelaxationKind kind) {
  BncConfig c;
  c.relaxation = kind;
  c.epsilon = 1e-7;
  c.leaf_size = 0;
  return c;
}

}  // namespace

TEST(Gap, Definition) {
  EXPECT_DOUBLE_EQ(relative_gap(99.0, 100.0), 0.01);
  EXPECT_DOUBLE_EQ(relative_gap(0.0, 0.0), 0.0);
  EXPECT_TRUE(std::isinf(relative_gap(1.0, std::numeric_limits<double>::infinity())));
  BncConfig c;
  EXPECT_DOUBLE_EQ(resolve_epsilon(c, 499), 0.01);
  EXPECT_DOUBLE_EQ(resolve_epsilon(c, 500), 0.1);
  EXPECT_EQ(resolve_relaxation(c, 150, 3), RelaxationKind::VectorLifting);
  EXPECT_EQ(resolve_relaxation(c, 300, 3), RelaxationKind::MatrixLifting);
  EXPECT_EQ(resolve_relaxation(c, 100, 5), RelaxationKind::MatrixLifting);
}

TEST(Branching, MlScoresMatchFormula) {
  std::mt19937 rng(51);
  std::uniform_real_distribution<double> u(0.0, 0.4);
  for (int rep = 0; rep < 10; ++rep) {
    Matrix z(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = i; j < 6; ++j) z(i, j) = z(j, i) = u(rng);
    double top = -1.0;
    IndexPair want{-1, -1};
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) {
        double d = 0.0;
        for (int t = 0; t < 6; ++t) d += (z(i, t) - z(j, t)) * (z(i, t) - z(j, t));
        const double s = std::min(z(i, j), d);
        EXPECT_DOUBLE_EQ(branch_score_ml(z, i, j), s);
        EXPECT_DOUBLE_EQ(branch_score_ml(z, j, i), s);
        if (s > top) {
          top = s;
          want = {i, j};
        }
      }
    EXPECT_EQ(branch_pair_ml(z), want);
  }
}

TEST(Branching, VanishingScoresThrow) {
  const std::vector<int> lab = {0, 1, 0, 1};
  EXPECT_THROW(branch_pair_ml(oracle::partition_z(lab, {2, 2})), std::domain_error);
  const Matrix uniform = Matrix::Constant(4, 4, 0.25);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) EXPECT_EQ(branch_score_ml(uniform, i, j), 0.0);
  EXPECT_THROW(branch_pair_ml(uniform), std::domain_error);
  VlPrimal p;
  for (const auto& y : oracle::lift_vl(lab, 2)) {
    p.pi.push_back(y.col(0).tail(4));
    p.big_pi.push_back(y.bottomRightCorner(4, 4));
  }
  EXPECT_THROW(branch_pair_vl(p), std::domain_error);
}

TEST(Branching, TiesGoToFirstPair) {
  Matrix z = Matrix::Identity(4, 4) * 0.5;
  z(0, 1) = z(1, 0) = z(2, 3) = z(3, 2) = 0.25;
  EXPECT_DOUBLE_EQ(branch_score_ml(z, 0, 1), branch_score_ml(z, 2, 3));
  EXPECT_EQ(branch_pair_ml(z), IndexPair(0, 1));
}

TEST(Branching, HandBuiltVlPrimal) {
  VlPrimal p;
  p.pi = {Vector::Ones(3)};
  p.big_pi = {(Matrix(3, 3) << 1, 0.5, 0, 0.5, 1, 0, 0, 0, 1).finished()};
  EXPECT_DOUBLE_EQ(branch_score_vl(p, 0, 1), 0.5);
  EXPECT_DOUBLE_EQ(branch_score_vl(p, 1, 0), 0.5);
  EXPECT_EQ(branch_pair_vl(p), IndexPair(0, 1));
}

TEST(Branching, FallbackSkipsCannotLinks) {
  Matrix t = Matrix::Zero(3, 3);
  t(0, 1) = t(1, 0) = 0.5;
  t(1, 2) = t(2, 1) = 0.4;
  EXPECT_EQ(fallback_pair(t, {}), IndexPair(0, 1));
  EXPECT_EQ(fallback_pair(t, {{0, 1}}), IndexPair(1, 2));
  EXPECT_FALSE(fallback_pair(t, {{0, 1}, {0, 2}, {1, 2}}));
}

TEST(Children, Structure) {
  BncNode root;
  root.map = ShrinkMap(3);
  root.cuts = {{CutKind::MlTriB, 0, 2, 0, 1}, {CutKind::MlTriA, 0, 2, 0, 0}};
  const auto [must, cannot] = make_children(root, {0, 1}, RelaxationKind::MatrixLifting, 2, 1);
  EXPECT_EQ(must.map.size(), 2);
  EXPECT_EQ(must.map.weights(), (std::vector<int>{2, 1}));
  EXPECT_EQ(must.cuts, (std::vector<Cut>{{CutKind::MlTriA, 0, 1, 0, 0}}));
  EXPECT_EQ(cannot.map.size(), 3);
  EXPECT_EQ(cannot.cannot, (std::vector<IndexPair>{{0, 1}}));
  EXPECT_EQ(cannot.cuts, root.cuts);
  EXPECT_EQ(must.id, 1);
  EXPECT_EQ(cannot.id, 2);
  EXPECT_THROW(make_children(cannot, {1, 0}, RelaxationKind::MatrixLifting, 2, 3), std::invalid_argument);
  EXPECT_THROW(make_children(root, {1, 1}, RelaxationKind::MatrixLifting, 2, 3), std::invalid_argument);
}

TEST(Children, FeasibleSetsPartitionTheParent) {
  std::mt19937 rng(52);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 4 + static_cast<int>(rng() % 4), k = 2 + static_cast<int>(rng() % 2);
    const auto cards = oracle::random_cards(n, k, rng);
    BncNode node;
    node.map = ShrinkMap(n);
    // A few random branching steps, keeping one child at random.
    for (int depth = 0; depth < 3; ++depth) {
      const int m = node.map.size();
      if (m < 2) break;
      int a = static_cast<int>(rng() % static_cast<unsigned>(m)), b = static_cast<int>(rng() % static_cast<unsigned>(m));
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (std::binary_search(node.cannot.begin(), node.cannot.end(), IndexPair{a, b})) continue;
      const auto parent = feasible_set(node, cards);
      auto [must, cannot] = make_children(node, {a, b}, RelaxationKind::VectorLifting, k, 0);
      const auto fm = feasible_set(must, cards), fc = feasible_set(cannot, cards);
      std::set<std::vector<int>> both = fm;
      for (const auto& x : fc) EXPECT_TRUE(both.insert(x).second) << "children overlap";
      EXPECT_EQ(both, parent);
      node = rng() % 2 ? must : cannot;
    }
  }
}

TEST(Children, WarmStartAveragesMergedRows) {
  sdp::WarmStart ws;
  Matrix x = Matrix::Zero(4, 4);  // lead row 0, then points 0..2
  x(1, 1) = 1.0;
  x(2, 2) = 3.0;
  x(0, 3) = x(3, 0) = 2.0;
  ws.x = {x};
  ws.s = {Matrix::Zero(4, 4)};
  ws.z = {Matrix::Zero(4, 4)};
  const auto id = ShrinkMap(3).merge_index(0, 1);
  const auto out = merge_warm_start(ws, id, 2, 1);
  ASSERT_EQ(out.x[0].rows(), 3);
  EXPECT_DOUBLE_EQ(out.x[0](1, 1), 1.0);  // (1 + 3) / 4
  EXPECT_DOUBLE_EQ(out.x[0](0, 2), 2.0);
}

TEST(Leaves, EnumerationMatchesOracle) {
  std::mt19937 rng(53);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 5 + static_cast<int>(rng() % 4), k = 2 + static_cast<int>(rng() % 2);
    const auto cards = oracle::random_cards(n, k, rng);
    const Matrix p = oracle::random_points(n, 2, k, rng);
    const Matrix w = gram_from_points(Dataset(p));
    ShrinkMap map(n);
    map = map.merged(0, 1);
    const std::vector<IndexPair> cannot = {{1, 2}};
    const auto inst = ReducedInstance::from(w, map, cannot, CardinalitySpec(cards));
    const auto want = oracle::enumerate_optimum(p, cards, must_pairs(map), expand_constraints(map, cannot).cannot_links());
    const auto got = enumerate_node(inst);
    if (want.count == 0) {
      EXPECT_FALSE(got);
      continue;
    }
    ASSERT_TRUE(got);
    EXPECT_NEAR(got->objective, want.value, 1e-9 * (1 + want.value));
  }
}

TEST(Solve, SingletonClusters) {
  const Dataset ds((Matrix(3, 2) << 0, 0, 1, 2, 3, 1).finished());
  const auto r = solve_ccmssc(ds, CardinalitySpec({1, 1, 1}), BncConfig{});
  EXPECT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_EQ(r.nodes_processed, 1);
  ASSERT_TRUE(r.incumbent);
  EXPECT_EQ(r.incumbent->objective, 0.0);
}

TEST(Solve, RejectsMismatchedCardinalities) {
  const Dataset ds(Matrix::Random(5, 2));
  EXPECT_THROW(solve_ccmssc(ds, CardinalitySpec({2, 2}), BncConfig{}), std::invalid_argument);
}

TEST(Solve, SmallInstancesMatchEnumeration) {
  std::mt19937 rng(54);
  for (int rep = 0; rep < 16; ++rep) {
    const int n = 6 + static_cast<int>(rng() % 4), k = 2 + static_cast<int>(rng() % 2);
    const auto cards = oracle::random_cards(n, k, rng);
    const Dataset ds(oracle::random_points(n, 2, k, rng, 0.8));
    const auto want = oracle::enumerate_optimum(ds.points(), cards);
    const auto kind = rep % 2 ? RelaxationKind::MatrixLifting : RelaxationKind::VectorLifting;
    const auto r = solve_ccmssc(ds, CardinalitySpec(cards), exact_config(kind));
    EXPECT_NE(r.status, SolveStatus::TimeLimit);
    ASSERT_TRUE(r.incumbent);
    EXPECT_TRUE(r.incumbent->assignment.respects(CardinalitySpec(cards)));
    EXPECT_NEAR(r.incumbent->objective, want.value, 1e-9 * want.value);
    EXPECT_LE(r.best_lb, want.value * (1 + 1e-9));
    EXPECT_EQ(r.trace.size(), static_cast<size_t>(r.nodes_processed));
  }
}

TEST(Solve, WorkersAgreeOnTheOptimum) {
  std::mt19937 rng(55);
  const auto cards = std::vector<int>{3, 3, 3};
  const Dataset ds(oracle::random_points(9, 2, 3, rng, 0.5));
  const auto want = oracle::enumerate_optimum(ds.points(), cards);
  auto cfg = exact_config(RelaxationKind::MatrixLifting);
  cfg.workers = 3;
  const auto r = solve_ccmssc(ds, CardinalitySpec(cards), cfg);
  EXPECT_NE(r.status, SolveStatus::TimeLimit);
  EXPECT_NEAR(r.incumbent->objective, want.value, 1e-9 * want.value);
}

TEST(Solve, RootOnlyStopsAfterOneNode) {
  std::mt19937 rng(56);
  const Dataset ds(oracle::random_points(9, 2, 3, rng, 0.3));
  auto cfg = exact_config(RelaxationKind::VectorLifting);
  cfg.root_only = true;
  const auto r = solve_ccmssc(ds, CardinalitySpec({3, 3, 3}), cfg);
  EXPECT_EQ(r.nodes_processed, 1);
  EXPECT_LE(r.best_lb, oracle::enumerate_optimum(ds.points(), {3, 3, 3}).value * (1 + 1e-9));
}

TEST(Solve, RepeatRunsAgree) {
  std::mt19937 rng(57);
  const Dataset ds(oracle::random_points(9, 2, 2, rng, 0.3));
  const auto cfg = exact_config(RelaxationKind::VectorLifting);
  auto a = solve_ccmssc(ds, CardinalitySpec({4, 5}), cfg);
  auto b = solve_ccmssc(ds, CardinalitySpec({4, 5}), cfg);
  a.wall_time = b.wall_time = 0.0;
  EXPECT_EQ(a.best_lb, b.best_lb);
  EXPECT_EQ(a.best_ub, b.best_ub);
  EXPECT_EQ(a.nodes_processed, b.nodes_processed);
  EXPECT_EQ(a.incumbent->assignment.labels(), b.incumbent->assignment.labels());
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (size_t q = 0; q < a.trace.size(); ++q) EXPECT_EQ(a.trace[q].lb, b.trace[q].lb);
}

TEST(Solve, StatusNames) {
  for (auto s : {SolveStatus::Optimal, SolveStatus::GapReached, SolveStatus::TimeLimit})
    EXPECT_EQ(solve_status_from_string(to_string(s)), s);
  EXPECT_THROW(solve_status_from_string("done"), std::invalid_argument);
}
