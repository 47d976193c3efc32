#include <benchmark/benchmark.h>

#include <random>

#include "pickchoose/football.hpp"
#include "pickchoose/solver.hpp"
#include "pickchoose/verify.hpp"

namespace pc = pickchoose;

namespace {

// Fresh solver per iteration so the memo starts cold.
void BM_SolveG(benchmark::State& state) {
  const pc::Family g = pc::fixture_g();
  for (auto _ : state) {
    const pc::Solver solver;
    benchmark::DoNotOptimize(solver.status(g));
  }
}
BENCHMARK(BM_SolveG)->Unit(benchmark::kMillisecond);

void BM_SolveH(benchmark::State& state) {
  const pc::Family h = pc::fixture_h();
  for (auto _ : state) {
    const pc::Solver solver;
    benchmark::DoNotOptimize(solver.status(h));
  }
}
BENCHMARK(BM_SolveH)->Unit(benchmark::kMillisecond);

void BM_FootballTen(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(-20, 20);
  std::vector<pc::Rational> scores;
  for (int i = 0; i < 10; ++i) scores.emplace_back(d(rng));
  const pc::Board board(scores);
  for (auto _ : state) {
    const pc::Solver solver;
    benchmark::DoNotOptimize(pc::analyze(solver, board).alice_wins);
  }
}
BENCHMARK(BM_FootballTen)->Unit(benchmark::kMillisecond);

void BM_EnumerateSix(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pc::enumerate_increasing(6, k, [](const pc::Family&) {}));
  }
}
BENCHMARK(BM_EnumerateSix)->DenseRange(1, 5)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
