#include <benchmark/benchmark.h>

#include "sfc/exact.hpp"
#include "sfc/gen.hpp"
#include "sfc/heuristic.hpp"
#include "sfc/latency.hpp"

namespace {

sfc::Instance scaled(std::size_t servers, std::size_t chains, double load = 0.5) {
  sfc::GenSpec spec;
  spec.servers = servers;
  spec.chains = chains;
  spec.load = load;
  return sfc::generate(spec);
}

void BM_RoundRobin(benchmark::State& state) {
  const auto inst = scaled(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)) / 2);
  for (auto _ : state) benchmark::DoNotOptimize(sfc::round_robin_place(inst));
}
BENCHMARK(BM_RoundRobin)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond);

void BM_RoundRobinTight(benchmark::State& state) {
  const auto inst = scaled(4096, 2048, 0.95);
  double rate = 0;
  for (auto _ : state) rate = sfc::round_robin_place(inst).deployment_rate();
  state.counters["deployment_rate"] = rate;
}
BENCHMARK(BM_RoundRobinTight)->Unit(benchmark::kMillisecond);

void BM_RandomPlace(benchmark::State& state) {
  const auto inst = scaled(4096, 2048);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sfc::random_place(inst, seed++));
}
BENCHMARK(BM_RandomPlace)->Unit(benchmark::kMillisecond);

void BM_ComputeTraffic(benchmark::State& state) {
  const auto inst = scaled(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)) / 2);
  const auto p = sfc::round_robin_place(inst).provisioning;
  for (auto _ : state) benchmark::DoNotOptimize(sfc::compute_traffic(inst, p, sfc::TrafficMode::Physical));
}
BENCHMARK(BM_ComputeTraffic)->Arg(256)->Arg(4096)->Unit(benchmark::kMicrosecond);

void BM_Evaluate(benchmark::State& state) {
  const auto inst = scaled(1024, 512);
  const auto p = sfc::round_robin_place(inst).provisioning;
  for (auto _ : state) benchmark::DoNotOptimize(sfc::evaluate(inst, p, {}));
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMillisecond);

void BM_NodeLatency(benchmark::State& state) {
  double mu = 10.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sfc::node_latency({10.0, mu, 100}));
    mu = mu > 40 ? 10.5 : mu + 0.01;
  }
}
BENCHMARK(BM_NodeLatency);

void BM_ExactSolve(benchmark::State& state) {
  sfc::GenSpec spec;
  spec.servers = 4;
  spec.chains = 2;
  spec.max_chain_len = static_cast<std::size_t>(state.range(0));
  spec.seed = 3;
  const auto inst = sfc::generate(spec);
  for (auto _ : state) benchmark::DoNotOptimize(sfc::exact_solve(inst, 0.5));
}
BENCHMARK(BM_ExactSolve)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
