#include "ccmssc/cuts.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace ccmssc;

namespace {

// Every triangle inequality written out from its definition, over all ordered
// index triples, then canonicalized.
std::vector<FoundCut> brute_vl(const VlPrimal& p, int max_found, double tol) {
  std::vector<FoundCut> all;
  for (int h = 0; h < static_cast<int>(p.pi.size()); ++h) {
    const Vector& x = p.pi[static_cast<size_t>(h)];
    const Matrix& X = p.big_pi[static_cast<size_t>(h)];
    const int m = static_cast<int>(x.size());
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) {
          if (a == b || a == c || b == c) continue;
          if (a < b && b < c) {
            const double v = x(a) + x(b) + x(c) - X(a, b) - X(a, c) - X(b, c) - 1.0;
            if (v > tol) all.push_back({{CutKind::VlTriA, h, a, b, c}, v});
          }
          if (b < c) {
            const double v = X(a, b) + X(a, c) - x(a) - X(b, c);
            if (v > tol) all.push_back({{CutKind::VlTriB, h, a, b, c}, v});
          }
        }
  }
  std::sort(all.begin(), all.end(), [](const FoundCut& u, const FoundCut& v) {
    return u.violation != v.violation ? u.violation > v.violation : u.cut < v.cut;
  });
  if (static_cast<int>(all.size()) > max_found) all.resize(static_cast<size_t>(max_found));
  return all;
}

std::vector<FoundCut> brute_ml(const Matrix& Z, int max_found, double tol) {
  std::vector<FoundCut> all;
  const int m = static_cast<int>(Z.rows());
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (a == b) continue;
      if (Z(a, b) - Z(a, a) > tol) all.push_back({{CutKind::MlTriA, 0, a, b, 0}, Z(a, b) - Z(a, a)});
      for (int c = b + 1; c < m; ++c) {
        if (c == a) continue;
        const double v = Z(a, b) + Z(a, c) - Z(a, a) - Z(b, c);
        if (v > tol) all.push_back({{CutKind::MlTriB, 0, a, b, c}, v});
      }
    }
  std::sort(all.begin(), all.end(), [](const FoundCut& u, const FoundCut& v) {
    return u.violation != v.violation ? u.violation > v.violation : u.cut < v.cut;
  });
  if (static_cast<int>(all.size()) > max_found) all.resize(static_cast<size_t>(max_found));
  return all;
}

VlPrimal random_vl(int m, int k, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VlPrimal p;
  for (int h = 0; h < k; ++h) {
    Vector x(m);
    Matrix X(m, m);
    for (int i = 0; i < m; ++i) x(i) = u(rng);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) X(i, j) = X(j, i) = i == j ? x(i) : u(rng) * std::min(x(i), x(j));
    p.pi.push_back(x);
    p.big_pi.push_back(X);
  }
  return p;
}

Matrix random_z(int m, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 0.5);
  Matrix z(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) z(i, j) = z(j, i) = u(rng);
  return z;
}

void expect_same(const std::vector<FoundCut>& got, const std::vector<FoundCut>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (size_t q = 0; q < got.size(); ++q) {
    EXPECT_EQ(got[q].cut, want[q].cut);
    EXPECT_NEAR(got[q].violation, want[q].violation, 1e-12);
  }
}

}  // namespace

TEST(Separation, VlMatchesExhaustiveTriples) {
  std::mt19937 rng(31);
  for (int m = 3; m <= 15; m += 3) {
    const VlPrimal p = random_vl(m, 2, rng);
    expect_same(separate_vl(p, 1000000, 1e-4), brute_vl(p, 1000000, 1e-4));
    expect_same(separate_vl(p, 7, 1e-4), brute_vl(p, 7, 1e-4));
    for (const auto& f : separate_vl(p, 50, 1e-4)) EXPECT_NEAR(cut_violation(f.cut, p), f.violation, 1e-12);
  }
}

TEST(Separation, MlMatchesExhaustiveTriples) {
  std::mt19937 rng(32);
  for (int m = 3; m <= 15; m += 2) {
    MlPrimal p;
    p.z = random_z(m, rng);
    expect_same(separate_ml(p, 1000000, 1e-4), brute_ml(p.z, 1000000, 1e-4));
    expect_same(separate_ml(p, 5, 1e-4), brute_ml(p.z, 5, 1e-4));
  }
}

TEST(Separation, IntegralPointsViolateNothing) {
  const std::vector<int> lab = {0, 1, 1, 0, 2, 1};
  const auto y = oracle::lift_vl(lab, 3);
  VlPrimal p;
  for (const auto& b : y) {
    p.pi.push_back(b.col(0).tail(6));
    p.big_pi.push_back(b.bottomRightCorner(6, 6));
  }
  EXPECT_TRUE(separate_vl(p, 1000, 1e-9).empty());
  MlPrimal q;
  q.z = oracle::partition_z(lab, {2, 3, 1});
  EXPECT_TRUE(separate_ml(q, 1000, 1e-9).empty());
  q.z = Matrix::Identity(5, 5);
  EXPECT_TRUE(separate_ml(q, 1000, 1e-9).empty());
}

TEST(Separation, HandEvaluatedViolations) {
  VlPrimal p;
  p.pi = {Vector::Ones(3)};
  p.big_pi = {Matrix::Identity(3, 3)};
  const auto f = separate_vl(p, 10, 1e-4);
  ASSERT_FALSE(f.empty());
  EXPECT_EQ(f[0].cut, (Cut{CutKind::VlTriA, 0, 0, 1, 2}));
  EXPECT_DOUBLE_EQ(f[0].violation, 2.0);

  MlPrimal q;
  q.z = Matrix::Identity(2, 2) * 0.5;
  q.z(0, 1) = q.z(1, 0) = 0.6;
  const auto g = separate_ml(q, 10, 1e-4);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].cut.kind, CutKind::MlTriA);
  EXPECT_NEAR(g[0].violation, 0.1, 1e-12);
}

TEST(Pool, QuotaAndOrder) {
  std::vector<FoundCut> found;
  for (int q = 0; q < 1000; ++q) found.push_back({{CutKind::MlTriA, 0, q, q + 1, 0}, 1000.0 - q});
  const auto pool = update_pool({}, {}, Vector(0), found, 0.1, 1e-4);
  ASSERT_EQ(pool.size(), 100u);
  for (int q = 0; q < 100; ++q) EXPECT_EQ(pool[static_cast<size_t>(q)], found[static_cast<size_t>(q)].cut);
}

TEST(Pool, PurgeAndDedup) {
  const std::vector<Cut> pool = {{CutKind::MlTriA, 0, 0, 1, 0}, {CutKind::MlTriA, 0, 1, 2, 0}, {CutKind::MlTriA, 0, 2, 3, 0}};
  // Slack large and multiplier zero: dropped. Tight or with a multiplier: kept.
  const std::vector<double> slack = {0.5, 0.0, 0.5};
  const Vector mult = (Vector(3) << 0.0, 0.0, 0.3).finished();
  const auto same = update_pool(pool, slack, mult, {}, 0.1, 1e-4);
  EXPECT_EQ(same, (std::vector<Cut>{pool[1], pool[2]}));
  const auto dup = update_pool(pool, slack, mult, {{pool[1], 0.2}}, 1.0, 1e-4);
  EXPECT_EQ(dup.size(), 2u);
  EXPECT_THROW(update_pool(pool, {0.0}, mult, {}, 0.1, 1e-4), std::invalid_argument);
}

TEST(Pool, StopRule) {
  EXPECT_TRUE(cp_should_stop(100.0, 200.0, 0, 1e-4));
  EXPECT_FALSE(cp_should_stop(100.0, 100.5, 10, 1e-4));
  EXPECT_TRUE(cp_should_stop(100.0, 100.005, 10, 1e-4));
}

TEST(Pool, RemapThroughMerge) {
  // Merge super points 1 and 3 of 5: ids become {0, 1, 2, 1, 3}.
  const std::vector<int> id = ShrinkMap(5).merge_index(1, 3);
  const std::vector<Cut> cuts = {{CutKind::VlTriA, 0, 1, 2, 3},   // collapses
                                 {CutKind::VlTriA, 1, 2, 3, 4},   // -> (1, 2, 3)
                                 {CutKind::VlTriB, 0, 4, 0, 3},   // apex 3, -> s,t = (0, 1)
                                 {CutKind::MlTriA, 0, 3, 1, 0},   // collapses
                                 {CutKind::MlTriB, 0, 0, 4, 3}};  // -> (0, 1, 3)
  const auto out = remap_cuts(cuts, id);
  EXPECT_EQ(out, (std::vector<Cut>{{CutKind::VlTriA, 1, 1, 2, 3}, {CutKind::VlTriB, 0, 3, 0, 1}, {CutKind::MlTriB, 0, 0, 1, 3}}));
}

TEST(Soundness, SeparatedCutsHoldOnEveryFeasiblePoint) {
  std::mt19937 rng(33);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 6 + rep % 3, k = 2 + rep % 2;
    const auto cards = oracle::random_cards(n, k, rng);
    const Matrix pts = oracle::random_points(n, 2, k, rng);
    const auto inst = ReducedInstance::root(gram_from_points(Dataset(pts)), CardinalitySpec(cards));
    sdp::Settings st;
    st.tol = 1e-5;
    const Relaxation vl = build_vl(inst), ml = build_ml(inst);
    const auto fv = separate_vl(extract_vl(vl, solve_relaxation(vl, st).x), 100000, 1e-4);
    const auto fm = separate_ml(extract_ml(ml, solve_relaxation(ml, st).x), 100000, 1e-4);
    for (const auto& f : fv) EXPECT_GT(f.violation, 1e-4);
    for (const auto& f : fm) EXPECT_GT(f.violation, 1e-4);
    oracle::for_each_assignment(n, cards, {}, {}, [&](const std::vector<int>& lab) {
      const auto y = oracle::lift_vl(lab, k);
      const VlPrimal p = extract_vl(vl, y);
      for (const auto& f : fv) ASSERT_LE(cut_violation(f.cut, p), 1e-12);
      MlPrimal q;
      q.z = oracle::partition_z(lab, cards);
      for (const auto& f : fm) ASSERT_LE(cut_violation(f.cut, q), 1e-12);
    });
  }
}
