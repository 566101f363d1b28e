#include "adpdtc/analysis.hpp"
#include "adpdtc/fft.hpp"
#include "adpdtc/lattice.hpp"
#include "adpdtc/lineshape.hpp"
#include "adpdtc/quantum.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace adpdtc;

namespace {

quantum::SpinSystem cluster(int spins) {
  quantum::ClusterSpec spec;
  spec.phosphorus_neighbors = spins - 1;
  return quantum::cluster_system(lattice::UnitCell::adp(), {60.0, 0.0}, spec);
}

pulseq::ExpandedParts dtc_parts(pulseq::PulseMode mode) {
  const auto program = pulseq::builtin("dtc", {{"theta", "1.04pi"}, {"tau", "392.5us"}, {"N", "128"}});
  return pulseq::expand_parts(program, {}, mode);
}

}  // namespace

// One Floquet block propagator (finite pulse plus free evolution) per call.
static void BM_BlockPropagator(benchmark::State& state) {
  quantum::Engine engine(cluster(static_cast<int>(state.range(0))));
  const auto parts = dtc_parts(pulseq::PulseMode::Finite);
  for (auto _ : state) benchmark::DoNotOptimize(engine.timeline_propagator(0, parts.block));
}
BENCHMARK(BM_BlockPropagator)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_RunStroboscopic(benchmark::State& state) {
  const auto method = state.range(1) ? quantum::Method::Schur : quantum::Method::Stepwise;
  const auto parts = dtc_parts(pulseq::PulseMode::Finite);
  for (auto _ : state) {
    quantum::Engine engine(cluster(6), {.method = method});
    benchmark::DoNotOptimize(engine.run(parts, state.range(0)));
  }
}
BENCHMARK(BM_RunStroboscopic)
    ->Args({128, 0})
    ->Args({128, 1})
    ->Args({4096, 0})
    ->Args({4096, 1})
    ->Unit(benchmark::kMillisecond);

static void BM_IsingFid(benchmark::State& state) {
  std::vector<lineshape::IsingCoupling> c;
  for (int i = 0; i < state.range(0); ++i) c.push_back({2000.0 * std::sin(0.37 * i + 0.1), i % 3 ? 1 : 2});
  for (auto _ : state) benchmark::DoNotOptimize(lineshape::ising_fid(c, false, 5e-6, 4096));
}
BENCHMARK(BM_IsingFid)->Arg(300)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_CrystallineFraction(benchmark::State& state) {
  std::vector<double> s(static_cast<std::size_t>(state.range(0)));
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = (k % 2 ? 1.0 : -1.0) * std::exp(-static_cast<double>(k) / 50.0);
  const analysis::Window w{1, state.range(0)};
  for (auto _ : state) benchmark::DoNotOptimize(analysis::crystalline_fraction(s, w));
}
BENCHMARK(BM_CrystallineFraction)->Arg(128)->Arg(4096);

BENCHMARK_MAIN();
