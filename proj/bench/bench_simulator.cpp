#include <benchmark/benchmark.h>

#include <cmath>

#include "kms/batch.hpp"
#include "kms/config.hpp"
#include "kms/simulator.hpp"

namespace {

kms::NetworkConfig network() {
  kms::NetworkConfig net;
  net.alpha = 4.0;
  net.regime = kms::Regime::InterferenceLimited;
  const double l1 = 1.0 / (M_PI * 500.0 * 500.0);
  for (int t = 0; t < 2; ++t) {
    kms::TierConfig tc;
    tc.density = t == 0 ? l1 : 0.5 * l1;
    tc.power = t == 0 ? 199.5 : 1.995;
    tc.fading = kms::KappaMuShadowedParams::make(2.0, 2.0, 1.0, 1.0);
    tc.shadowing = kms::ShadowingModel::lognormal(0.0, 4.0);
    net.tiers.push_back(tc);
  }
  return net;
}

kms::RunConfig sweep_config() {
  return kms::load_config_text(R"({
    "alpha": 4, "regime": "interference_limited",
    "tiers": [{"density": 1e-3, "power": 1, "fading": {"kappa": 1, "mu": 2, "m": 2}}],
    "sweep": {"metric": "rate", "parameter": "tiers[0].fading.kappa", "values": [0.5, 1, 2, 4, 8, 16]}
  })");
}

void BM_SimulateParallel(benchmark::State& st) {
  const auto net = network();
  kms::SimConfig sc;
  sc.drops = st.range(0);
  sc.threads = 0;
  for (auto _ : st) benchmark::DoNotOptimize(kms::simulate(net, sc));
  st.SetItemsProcessed(st.iterations() * sc.drops);
}

void BM_SimulateSerial(benchmark::State& st) {
  const auto net = network();
  kms::SimConfig sc;
  sc.drops = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(kms::simulate_serial(net, sc));
  st.SetItemsProcessed(st.iterations() * sc.drops);
}

void BM_SweepParallel(benchmark::State& st) {
  const auto rc = sweep_config();
  for (auto _ : st) benchmark::DoNotOptimize(kms::run_sweep(rc));
}

void BM_SweepSerial(benchmark::State& st) {
  const auto rc = sweep_config();
  for (auto _ : st) benchmark::DoNotOptimize(kms::run_sweep_serial(rc));
}

}  // namespace

BENCHMARK(BM_SimulateParallel)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateSerial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
