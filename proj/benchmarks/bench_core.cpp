#include <benchmark/benchmark.h>

#include <random>

#include "phieq/equilibrium.hpp"
#include "phieq/game_ops.hpp"
#include "phieq/lp.hpp"
#include "phieq/polymatrix.hpp"
#include "phieq/qvi.hpp"
#include "phieq/reduction.hpp"

using namespace phieq;

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vec random_simplex(std::mt19937_64& rng, int l) {
  Vec p(l);
  double total = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - uniform01(rng));
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

FactoredGame dense_game(int n, int l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FactoredGame g;
  g.n_players = n;
  g.n_actions = l;
  std::vector<Vec> utilities(n, Vec(ProfileIndexer(n, l).size()));
  for (Vec& table : utilities)
    for (double& v : table) v = uniform01(rng);
  g.dense_utilities = std::move(utilities);
  g.costs.assign(n, {});
  return g;
}

MixtureStrategy mixture(int n, int l, int comps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  MixtureStrategy z;
  for (int c = 0; c < comps; ++c) {
    MixtureComponent comp;
    comp.weight = 1.0 / comps;
    for (int i = 0; i < n; ++i) comp.marginals.push_back(random_simplex(rng, l));
    z.components.push_back(std::move(comp));
  }
  return z;
}

void BM_ExpectedUtilityDense(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FactoredGame g = dense_game(n, 3, 1);
  const MixtureStrategy z = mixture(n, 3, 4, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(expected_utility(g, 0, z));
}
BENCHMARK(BM_ExpectedUtilityDense)->Arg(3)->Arg(5)->Arg(7);

void BM_ExpectedUtilityEdges(benchmark::State& state) {
  const PolymatrixGame source = random_instance(static_cast<int>(state.range(0)), 3, 3, 3);
  const ConstrainedInstance inst = reduce(source, 0.8);
  const MixtureStrategy z = mixture(inst.game.n_players, 3, 4, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(expected_utility(inst.game, 0, z));
}
BENCHMARK(BM_ExpectedUtilityEdges)->Arg(4)->Arg(8);

void BM_ApplyDeviation(benchmark::State& state) {
  const MixtureStrategy z = mixture(6, 3, 8, 5);
  std::mt19937_64 rng(6);
  Matrix phi(3, 3);
  for (int r = 0; r < 3; ++r) {
    const Vec row = random_simplex(rng, 3);
    for (int c = 0; c < 3; ++c) phi(r, c) = row[c];
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(apply_deviation(phi, 2, z));
}
BENCHMARK(BM_ApplyDeviation);

void BM_LpSolve(benchmark::State& state) {
  std::mt19937_64 rng(7);
  LinearProgram lp = LinearProgram::make(12);
  for (int j = 0; j < 12; ++j) {
    lp.objective[j] = uniform01(rng);
    lp.lower[j] = 0.0;
    lp.upper[j] = 1.0;
  }
  for (int r = 0; r < 20; ++r) {
    Vec row(12);
    for (double& v : row) v = 2.0 * uniform01(rng) - 1.0;
    lp.add_row(row, uniform01(rng) + 0.5);
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(lp_solve(lp));
}
BENCHMARK(BM_LpSolve);

void BM_Reduce(benchmark::State& state) {
  const PolymatrixGame g = random_instance(5, 4, 3, 8);
  for (auto _ : state)
    benchmark::DoNotOptimize(reduce(g, 0.8));
}
BENCHMARK(BM_Reduce);

void BM_SafeBestResponse(benchmark::State& state) {
  const ConstrainedInstance inst = reduce(random_instance(3, 2, 2, 9), 0.8);
  const MixtureStrategy z = mixture(6, 2, 3, 10);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        safe_best_response(inst.game, inst.left_index[0], z, inst.deviations));
}
BENCHMARK(BM_SafeBestResponse);

void BM_QviGap(benchmark::State& state) {
  const ConstrainedInstance inst = reduce(random_instance(3, 2, 2, 11), 0.8);
  const QviInstance qvi = build_qvi(inst.game, inst.eps_prime, inst.nu);
  const Vec z = flatten(ProductStrategy(6, Vec(2, 0.5)));
  for (auto _ : state)
    benchmark::DoNotOptimize(qvi_gap(qvi, z));
}
BENCHMARK(BM_QviGap);

void BM_SolveQviGrid(benchmark::State& state) {
  const ConstrainedInstance inst = reduce(random_instance(3, 2, 2, 12), 1.0);
  const QviInstance qvi = build_qvi(inst.game, inst.eps_prime, inst.nu);
  QviConfig config;
  config.max_iter = 50;  // push quickly into the grid fallback
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_qvi(qvi, config));
}
BENCHMARK(BM_SolveQviGrid);

}  // namespace

BENCHMARK_MAIN();
