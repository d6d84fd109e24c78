#include <benchmark/benchmark.h>

#include "riesz/kernel.hpp"
#include "riesz/rng.hpp"
#include "riesz/sampler.hpp"

namespace {

void BM_HurwitzZeta(benchmark::State& state) {
  riesz::Xoshiro256 rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(riesz::hurwitz_zeta(0.5, 1e-3 + rng.uniform()));
  }
}
BENCHMARK(BM_HurwitzZeta);

void BM_KernelTable(benchmark::State& state) {
  const auto model = riesz::KernelModel::build({0.5, 1.0, 2});
  riesz::Xoshiro256 rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.g(1e-4 + 0.9998 * rng.uniform()));
  }
}
BENCHMARK(BM_KernelTable);

void BM_KernelDirect(benchmark::State& state) {
  const auto model = riesz::KernelModel::build({0.5, 1.0, 2});
  riesz::Xoshiro256 rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.direct(1e-4 + 0.9998 * rng.uniform()));
  }
}
BENCHMARK(BM_KernelDirect);

void BM_KernelRow(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto model = riesz::KernelModel::build({0.5, 1.0, n});
  std::vector<double> xs(n);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  riesz::Xoshiro256 rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.row(rng.uniform(), xs.data(), n, 0, out.data()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_KernelRow)->Arg(64)->Arg(256)->Arg(1024);

void BM_MetropolisSweep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto model = riesz::KernelModel::build({0.5, 2.0, n});
  riesz::Xoshiro256 init(5);
  riesz::Chain chain(model, riesz::initial_configuration(n, 0.1, init), 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain.sweep(riesz::Scheme::rwm, 1.0));
  }
}
BENCHMARK(BM_MetropolisSweep)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_CollectiveMove(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto model = riesz::KernelModel::build({0.5, 2.0, n});
  riesz::Xoshiro256 init(7);
  riesz::Chain chain(model, riesz::initial_configuration(n, 0.1, init), 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain.collective_move(1, 0.05));
  }
}
BENCHMARK(BM_CollectiveMove)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
