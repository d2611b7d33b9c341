#include <benchmark/benchmark.h>

#include "termcoding/examples.hpp"
#include "termcoding/normalize.hpp"
#include "termcoding/semantics.hpp"

namespace tc = termcoding;

static void BM_CountSteinerProduct(benchmark::State& state) {
  tc::System s = tc::examples::gen("steiner-quasigroup");
  tc::Interpretation w = tc::examples::steiner_n4_witness();
  tc::Interpretation I = w;
  for (int i = 1; i < state.range(0); ++i) I = tc::product(s, I, w);
  for (auto _ : state) benchmark::DoNotOptimize(tc::count_solutions(s, I, 0).count);
  state.counters["n"] = static_cast<double>(I.sizes.at("A"));
}
BENCHMARK(BM_CountSteinerProduct)->DenseRange(1, 3);

static void BM_CountC5Core(benchmark::State& state) {
  tc::System core = tc::examples::c5_core();
  tc::Interpretation I = tc::examples::c5_core_witness(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tc::count_solutions(core, I, 0).count);
}
BENCHMARK(BM_CountC5Core)->Arg(2)->Arg(3)->Arg(4);

static void BM_DispersionImage(benchmark::State& state) {
  tc::System s = tc::examples::gen("single-relay");
  tc::Interpretation I = tc::examples::network_coding_witness(static_cast<std::uint64_t>(state.range(0)));
  tc::Interpretation J = tc::zero_interpretation(s, tc::uniform_sizes(s, state.range(0)));
  J.tables.at("f") = I.tables.at("f");
  for (auto _ : state) benchmark::DoNotOptimize(tc::dispersion_image(s, J));
}
BENCHMARK(BM_DispersionImage)->Arg(3)->Arg(5)->Arg(8);

static void BM_NormalizeDiversify(benchmark::State& state) {
  tc::System s = tc::examples::gen("steiner-t", {{"t", state.range(0)}});
  for (auto _ : state) benchmark::DoNotOptimize(tc::normalize_diversify(s).system.equations.size());
}
BENCHMARK(BM_NormalizeDiversify)->DenseRange(2, 6);
