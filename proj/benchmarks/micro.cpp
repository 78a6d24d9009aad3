#include "ccmssc/branch_and_cut.hpp"
#include "ccmssc/cuts.hpp"
#include "ccmssc/heuristic.hpp"
#include "ccmssc/sdp_core.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace ccmssc;

namespace {

Matrix random_symmetric(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  return 0.5 * (a + a.transpose());
}

const Dataset& ruspini() {
  static const Dataset d = read_csv(std::string(CCMSSC_DATA_DIR) + "/ruspini.csv");
  return d;
}

void BM_ProjectPsd(benchmark::State& state) {
  const Matrix a = random_symmetric(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(sdp::project_psd(a));
}
BENCHMARK(BM_ProjectPsd)->Arg(76)->Arg(151)->Arg(179);

void BM_SeparateMl(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  MlPrimal p;
  p.z = random_symmetric(m, 2).cwiseAbs() / m;
  for (auto _ : state) benchmark::DoNotOptimize(separate_ml(p, 100000, 1e-4));
}
BENCHMARK(BM_SeparateMl)->Arg(75)->Arg(150);

void BM_SolveAssignment(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u;
  Matrix costs(n, 3);
  for (int i = 0; i < n; ++i)
    for (int h = 0; h < 3; ++h) costs(i, h) = u(rng);
  const CardinalitySpec cards({n / 3, n / 3, n - 2 * (n / 3)});
  for (auto _ : state) benchmark::DoNotOptimize(solve_assignment(costs, cards, PairwiseConstraints()));
}
BENCHMARK(BM_SolveAssignment)->Arg(150)->Arg(600);

void BM_RuspiniRootMl(benchmark::State& state) {
  const CardinalitySpec cards({15, 20, 17, 23});
  sdp::Settings st;
  st.tol = 1e-5;
  for (auto _ : state) benchmark::DoNotOptimize(root_bound(ruspini(), cards, RelaxationKind::MatrixLifting, st));
}
BENCHMARK(BM_RuspiniRootMl)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
