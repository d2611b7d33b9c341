#include <benchmark/benchmark.h>

#include "termcoding/examples.hpp"
#include "termcoding/normalize.hpp"
#include "termcoding/search.hpp"

namespace tc = termcoding;

static tc::SearchParams one_thread() {
  tc::SearchParams p;
  p.threads = 1;
  return p;
}

static void BM_ExhaustiveSteiner(benchmark::State& state) {
  tc::System s = tc::examples::gen("steiner-quasigroup");
  auto sz = tc::uniform_sizes(s, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(tc::exhaustive_max(s, sz, one_thread()).best_count);
}
BENCHMARK(BM_ExhaustiveSteiner)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_MaxCode(benchmark::State& state) {
  tc::Diversified d = tc::normalize_diversify(tc::examples::gen(state.range(0) == 0 ? "sols" : "c5"));
  auto sz = tc::uniform_sizes(d.system, 2);
  for (auto _ : state) benchmark::DoNotOptimize(tc::max_code(d.system, sz, one_thread()));
}
BENCHMARK(BM_MaxCode)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_AnnealSteinerFour(benchmark::State& state) {
  tc::System s = tc::examples::gen("steiner-quasigroup");
  auto sz = tc::uniform_sizes(s, 4);
  tc::SearchParams p = one_thread();
  p.mode = tc::SearchMode::Anneal;
  p.restarts = 1;
  p.steps = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(tc::anneal_max(s, sz, p).best_count);
}
BENCHMARK(BM_AnnealSteinerFour)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
