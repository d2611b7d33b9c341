#include <benchmark/benchmark.h>

#include "termcoding/depgraph.hpp"
#include "termcoding/entropy.hpp"
#include "termcoding/examples.hpp"
#include "termcoding/normalize.hpp"

namespace tc = termcoding;

static void BM_ShannonBound(benchmark::State& state) {
  static const char* names[] = {"unsolvable-v1", "c5", "sols", "unsolvable-v2"};
  tc::Diversified d = tc::normalize_diversify(tc::examples::gen(names[state.range(0)]));
  tc::DepGraph g = tc::build_graph(d.system);
  auto sz = tc::uniform_sizes(d.system, 2);
  for (auto _ : state) benchmark::DoNotOptimize(tc::shannon_bound(g, sz).normalised_bound);
  state.SetLabel(names[state.range(0)]);
}
BENCHMARK(BM_ShannonBound)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

static void BM_SimplexDense(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  tc::LinearProgram lp;
  lp.n_vars = n;
  lp.objective.assign(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    tc::LinearProgram::Row r;
    for (std::size_t j = 0; j < n; ++j) r.coeffs.push_back({j, mpq_class(1 + (i * 7 + j * 3) % 5, 1 + (i + j) % 3)});
    r.rhs = 1 + i % 4;
    lp.rows.push_back(r);
  }
  for (auto _ : state) benchmark::DoNotOptimize(tc::lp_maximize(lp).value);
}
BENCHMARK(BM_SimplexDense)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
