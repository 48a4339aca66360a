#include <benchmark/benchmark.h>

#include "qlc/flc.hpp"
#include "qlc/spectral.hpp"
#include "qlc/symbolic.hpp"

using namespace qlc;

static void BM_Propagate(benchmark::State& state) {
  TransferProgram prog = fibonacci_kp_program(static_cast<std::size_t>(state.range(0)), 3);
  long double e = 3.3L;
  for (auto _ : state) {
    benchmark::DoNotOptimize(prog.run(e));
    e += 1e-6L;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(prog.factor_count()));
}
BENCHMARK(BM_Propagate)->Arg(10)->Arg(16)->Arg(21);

static void BM_FloquetBands(benchmark::State& state) {
  TransferProgram prog = fibonacci_kp_program(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(floquet_bands(prog, 0, 20, 1e-3L));
}
BENCHMARK(BM_FloquetBands)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_Decompose(benchmark::State& state) {
  SuspensionParams sp = fibonacci_kp_params(3);
  MeasureWindow w = suspend_with_profiles(fibonacci_word(static_cast<std::size_t>(state.range(0))), sp);
  PieceSet ps(sp.profiles);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(w, ps, w.origin()));
}
BENCHMARK(BM_Decompose)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_CheckSfdp(benchmark::State& state) {
  SuspensionParams sp = fibonacci_kp_params(3);
  MeasureWindow w = suspend_with_profiles(fibonacci_word(static_cast<std::size_t>(state.range(0))), sp);
  Decomposition d = decompose(w, PieceSet(sp.profiles), w.origin());
  ExactLength ell = ExactLength::parse(Basis::golden(), "4");
  for (auto _ : state) benchmark::DoNotOptimize(check_sfdp(w, d, ell));
}
BENCHMARK(BM_CheckSfdp)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_CircleMapExact(benchmark::State& state) {
  Quadratic a = Quadratic::parse("sqrt5-2");
  for (auto _ : state) benchmark::DoNotOptimize(circle_map_word(a, a, 0, state.range(0) - 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CircleMapExact)->Arg(10000);

static void BM_CircleMapDecimal(benchmark::State& state) {
  const std::string d = "0.23606797749978969640917366873127623544061835961152";
  for (auto _ : state) benchmark::DoNotOptimize(circle_map_word(d, d, 0, state.range(0) - 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CircleMapDecimal)->Arg(10000);

static void BM_GordonScan(benchmark::State& state) {
  Word w = circle_map_word("sqrt5-2", "sqrt5-2", 0, 9999).word;
  std::vector<std::int64_t> ps{1, 4, 17, 72, 305, 1292};
  for (auto _ : state) benchmark::DoNotOptimize(gordon_scan(w, ps));
}
BENCHMARK(BM_GordonScan)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
