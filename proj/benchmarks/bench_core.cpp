#include <benchmark/benchmark.h>

#include "djp/edp_approx.hpp"
#include "djp/fvs.hpp"
#include "djp/generators.hpp"
#include "djp/mcf_lp.hpp"
#include "djp/ndp_fpt.hpp"
#include "djp/oracle.hpp"
#include "djp/rounding.hpp"

namespace {

using namespace djp;

Instance grid(int k) { return normalize_instance(gen_grid_gap(k).instance); }

Instance random_edp(std::uint64_t seed, int forest) {
  return normalize_instance(gen_random_fvs(forest, 3, 8, 6, seed).instance);
}

void BM_SolveLpGrid(benchmark::State& state) {
  const Instance inst = grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(inst).objective);
}
BENCHMARK(BM_SolveLpGrid)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_OracleGrid(benchmark::State& state) {
  const Instance inst = grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_opt(inst, OracleGuard{.force = true}).value);
}
BENCHMARK(BM_OracleGrid)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_FvsExactPetersen(benchmark::State& state) {
  SimpleGraph h = builtin_cubic("petersen");
  Graph g(h.n);
  for (auto [a, b] : h.edges) g.add_edge(a, b);
  for (auto _ : state) benchmark::DoNotOptimize(fvs_exact(g, 10)->size());
}
BENCHMARK(BM_FvsExactPetersen);

void BM_FvsApproxRandom(benchmark::State& state) {
  const Instance inst = random_edp(11, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fvs_approx2(inst.graph).size());
}
BENCHMARK(BM_FvsApproxRandom)->Arg(20)->Arg(40);

void BM_RoundWithRetries(benchmark::State& state) {
  const Instance inst = random_edp(5, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(round_with_retries(inst).best.congestion);
}
BENCHMARK(BM_RoundWithRetries)->Arg(15)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_ApproxEdp(benchmark::State& state) {
  const Instance inst = random_edp(9, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(approx_edp(inst).routing.size());
}
BENCHMARK(BM_ApproxEdp)->Arg(15)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_NdpFptClique(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  CliqueInput in{k, n, {}};
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) in.edges.push_back({{i, n - 1}, {j, n - 1}});
  const Instance inst = normalize_instance(gen_multicolored_clique(in).instance);
  for (auto _ : state) benchmark::DoNotOptimize(maxndp_fpt(inst).value);
}
BENCHMARK(BM_NdpFptClique)->Args({2, 3})->Args({3, 2})->Args({3, 3})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
