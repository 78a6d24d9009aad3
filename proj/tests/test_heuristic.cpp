#include "ccmssc/heuristic.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ccmssc;

namespace {

double cost_of(const Matrix& c, const std::vector<int>& lab) {
  double f = 0.0;
  for (size_t i = 0; i < lab.size(); ++i) f += c(static_cast<int>(i), lab[i]);
  return f;
}

// Two tight triangles far apart.
Matrix two_triangles() {
  return (Matrix(6, 2) << 0, 0, 1, 0, 0.5, 0.8, 10, 0, 11, 0, 10.5, 0.8).finished();
}

}  // namespace

TEST(Assignment, HandCases) {
  const Matrix c = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  const auto x = solve_assignment(c, CardinalitySpec({1, 1}), PairwiseConstraints(2, {}, {}));
  ASSERT_TRUE(x);
  EXPECT_EQ(x->labels(), (std::vector<int>{0, 1}));

  // Uniform costs: lexicographically smallest label vector.
  const auto z = solve_assignment(Matrix::Zero(5, 2), CardinalitySpec({2, 3}), PairwiseConstraints(5, {}, {}));
  ASSERT_TRUE(z);
  EXPECT_EQ(z->labels(), (std::vector<int>{0, 0, 1, 1, 1}));
}

TEST(Assignment, MatchesEnumerationWithConstraints) {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int infeasible = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 4 + static_cast<int>(rng() % 5), k = 2 + static_cast<int>(rng() % 2);
    const auto cards = oracle::random_cards(n, k, rng);
    Matrix c(n, k);
    for (int i = 0; i < n; ++i)
      for (int h = 0; h < k; ++h) c(i, h) = u(rng);
    std::vector<IndexPair> must, cannot;
    for (int q = static_cast<int>(rng() % 3); q > 0; --q) {
      const int a = static_cast<int>(rng() % static_cast<unsigned>(n)), b = static_cast<int>(rng() % static_cast<unsigned>(n));
      if (a != b) (rng() % 2 ? must : cannot).push_back({std::min(a, b), std::max(a, b)});
    }
    const auto want = oracle::enumerate_assignment(c, cards, must, cannot);
    std::optional<AssignmentMatrix> got;
    try {
      got = solve_assignment(c, CardinalitySpec(cards), PairwiseConstraints(n, must, cannot));
    } catch (const InconsistentConstraints&) {
      EXPECT_EQ(want.count, 0);
      ++infeasible;
      continue;
    }
    if (want.count == 0) {
      EXPECT_FALSE(got);
      ++infeasible;
      continue;
    }
    ASSERT_TRUE(got);
    EXPECT_TRUE(got->respects(CardinalitySpec(cards)));
    EXPECT_TRUE(PairwiseConstraints(n, must, cannot).satisfied_by(*got));
    EXPECT_NEAR(cost_of(c, got->labels()), want.value, 1e-12);
  }
  EXPECT_LT(infeasible, 100);
}

TEST(Assignment, ShrunkRespectsWeights) {
  // Super point weights 2, 1, 1; clusters of size 2 and 2.
  const Matrix c = (Matrix(3, 2) << 0, 10, 0, 1, 5, 0).finished();
  const auto lab = solve_assignment_shrunk(c, {2, 1, 1}, CardinalitySpec({2, 2}), {});
  ASSERT_TRUE(lab);
  EXPECT_EQ(*lab, (std::vector<int>{0, 1, 1}));
  EXPECT_FALSE(solve_assignment_shrunk(c.topRows(2), {3, 1}, CardinalitySpec({2, 2}), {}));
}

TEST(Rounding, RecoversFeasiblePointAndMatchesEnumeration) {
  const AssignmentMatrix x({1, 0, 0, 1, 1}, 2);
  const auto r = round_assignment(x.dense(), CardinalitySpec({2, 3}), PairwiseConstraints(5, {}, {}));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->labels(), x.labels());

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix xt(7, 2);
    for (int i = 0; i < 7; ++i) {
      xt(i, 0) = u(rng);
      xt(i, 1) = 1.0 - xt(i, 0);
    }
    const auto want = oracle::enumerate_assignment(-xt, {4, 3});
    EXPECT_EQ(want.count, 35);
    const auto got = round_assignment(xt, CardinalitySpec({4, 3}), PairwiseConstraints(7, {}, {}));
    ASSERT_TRUE(got);
    EXPECT_NEAR(cost_of(-xt, got->labels()), want.value, 1e-12);
  }
}

TEST(SoftAssignment, ExpandsSuperPoints) {
  const ShrinkMap map(std::vector<int>{0, 1, 0, 2});
  MlPrimal p;
  p.x = (Matrix(3, 2) << 0.7, 0.3, 0.2, 0.8, 0.5, 0.5).finished();
  p.z = Matrix::Zero(3, 3);
  const Matrix s = soft_from_ml(p, map);
  ASSERT_EQ(s.rows(), 4);
  EXPECT_EQ(s.row(0), s.row(2));
  EXPECT_DOUBLE_EQ(s(3, 1), 0.5);

  VlPrimal v;
  v.pi = {(Vector(3) << 1, 0, 0).finished(), (Vector(3) << 0, 1, 1).finished()};
  v.big_pi = {Matrix::Zero(3, 3), Matrix::Zero(3, 3)};
  const Matrix t = soft_from_vl(v, map);
  EXPECT_EQ(t, AssignmentMatrix({0, 1, 0, 1}, 2).dense());
}

TEST(KMeans, ObjectiveNeverIncreases) {
  std::mt19937 rng(43);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 10 + static_cast<int>(rng() % 20), k = 2 + static_cast<int>(rng() % 3);
    const auto cards = oracle::random_cards(n, k, rng);
    const Dataset ds(oracle::random_points(n, 2, k, rng, 0.7));
    Matrix centers(k, 2);
    for (int h = 0; h < k; ++h) centers.row(h) = ds.points().row(static_cast<int>(rng() % static_cast<unsigned>(n)));
    const auto res = constrained_kmeans(ds, CardinalitySpec(cards), centers, PairwiseConstraints(n, {}, {}));
    ASSERT_TRUE(res);
    EXPECT_TRUE(res->best.respects(CardinalitySpec(cards)));
    EXPECT_NEAR(res->objective, oracle::objective(ds.points(), res->best.labels(), k), 1e-9 * (1 + res->objective));
    for (size_t q = 1; q < res->history.size(); ++q) EXPECT_LE(res->history[q], res->history[q - 1] + 1e-9);
  }
}

TEST(KMeans, TwoTrianglesFromAnyStart) {
  const Dataset ds(two_triangles());
  const auto best = oracle::enumerate_optimum(ds.points(), {3, 3});
  std::mt19937 rng(44);
  std::uniform_real_distribution<double> u(-5.0, 15.0);
  for (int rep = 0; rep < 10; ++rep) {
    Matrix centers(2, 2);
    for (int i = 0; i < 4; ++i) centers(i / 2, i % 2) = u(rng);
    const auto res = constrained_kmeans(ds, CardinalitySpec({3, 3}), centers, PairwiseConstraints(6, {}, {}));
    ASSERT_TRUE(res);
    EXPECT_NEAR(res->objective, best.value, 1e-12);
  }
}

TEST(KMeans, HonoursPairwiseConstraints) {
  const Dataset ds(two_triangles());
  // Force points 0 and 3 together: the split of the triangles must change.
  const PairwiseConstraints pc(6, {{0, 3}}, {{1, 4}});
  const Matrix centers = (Matrix(2, 2) << 0, 0, 10, 0).finished();
  const auto res = constrained_kmeans(ds, CardinalitySpec({3, 3}), centers, pc);
  ASSERT_TRUE(res);
  EXPECT_TRUE(pc.satisfied_by(res->best));
  EXPECT_GE(res->objective, oracle::enumerate_optimum(ds.points(), {3, 3}, {{0, 3}}, {{1, 4}}).value - 1e-12);
}

TEST(KMeans, InfeasibleReturnsNothing) {
  const Dataset ds(two_triangles());
  const PairwiseConstraints pc(6, {{0, 1}, {1, 2}, {2, 3}}, {});
  EXPECT_FALSE(constrained_kmeans(ds, CardinalitySpec({3, 3}), Matrix::Zero(2, 2), pc));
}
