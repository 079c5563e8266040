// Benchmarks for the hot paths: contractibility search, loop classification,
// planner synthesis and verification, and corpus enumeration.
#include <benchmark/benchmark.h>

#include "digitop/corpus.hpp"
#include "digitop/curves.hpp"
#include "digitop/higher.hpp"
#include "digitop/loops.hpp"
#include "digitop/morph.hpp"
#include "digitop/planner.hpp"

using namespace digitop;

namespace {

DigitalImage cycle(int m, int kind) {
  return generate_cycle(m, AdjacencyKind::from_name(kind));
}

void BM_contractibility_hexagon(benchmark::State& state) {
  DigitalImage X = cycle(6, 8);
  for (auto _ : state) benchmark::DoNotOptimize(is_contractible(X));
}
BENCHMARK(BM_contractibility_hexagon);

void BM_loop_classes(benchmark::State& state) {
  DigitalImage X = cycle(6, 8);
  int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_loop_classes(X, m));
}
BENCHMARK(BM_loop_classes)->Arg(4)->Arg(5)->Arg(6);

void BM_cycle_planner(benchmark::State& state) {
  DigitalImage X = cycle(static_cast<int>(state.range(0)), 8);
  auto w = detect_simple_closed_curve(X);
  for (auto _ : state) {
    MotionPlanner p = synthesize_cycle_planner(*w);
    benchmark::DoNotOptimize(verify_planner(X, p));
  }
}
BENCHMARK(BM_cycle_planner)->Arg(6)->Arg(10)->Arg(16);

void BM_higher_planner(benchmark::State& state) {
  DigitalImage X = cycle(6, 8);
  auto w = detect_simple_closed_curve(X);
  int n = static_cast<int>(state.range(0));
  VerifyLevel level = n <= 4 ? VerifyLevel::Full : VerifyLevel::AnchorsOnly;
  for (auto _ : state)
    benchmark::DoNotOptimize(synthesize_higher_planner(*w, n, level));
}
BENCHMARK(BM_higher_planner)->Arg(3)->Arg(4)->Arg(5);

void BM_corpus(benchmark::State& state) {
  AdjacencyKind k = AdjacencyKind::from_name(8);
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_corpus(k, 3, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_corpus)->Arg(4)->Arg(6);

void BM_tc_classify(benchmark::State& state) {
  DigitalImage X = cycle(static_cast<int>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(tc_classify(X));
}
BENCHMARK(BM_tc_classify)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
