// Copyright 2026 The nvqhe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "nvqhe/engine.hpp"
#include "nvqhe/fluorescence.hpp"
#include "nvqhe/numerics.hpp"
#include "nvqhe/nv_model.hpp"

namespace {

using namespace nvqhe;

const nv::RateConstants kRates{};

void BM_MatExp7(benchmark::State& state) {
  const RMatrix m = nv::optical_matrix(kRates, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(numerics::mat_exp(m, 0.06));
}
BENCHMARK(BM_MatExp7);

void BM_Eig7(benchmark::State& state) {
  const RMatrix m = nv::optical_matrix(kRates, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(numerics::eig(m));
}
BENCHMARK(BM_Eig7);

void BM_WorkPerCycle(benchmark::State& state) {
  const RMatrix lp = engine::ThermalModel{kRates}.population_generator(0.76);
  const auto cfg = engine::CycleConfig::from_action(0.05, 1.6, 1.0 / 3.0, 0.41, 0.76);
  for (auto _ : state) benchmark::DoNotOptimize(engine::work_per_cycle(cfg, lp));
}
BENCHMARK(BM_WorkPerCycle);

void BM_EnsemblePower(benchmark::State& state) {
  const engine::ThermalModel model{kRates};
  const engine::DetuningDistribution dist;
  const auto cfg = engine::CycleConfig::from_action(0.05, 1.6, 1.0 / 3.0, 0.41, 0.76);
  for (auto _ : state) benchmark::DoNotOptimize(engine::ensemble_power(cfg, model, dist));
}
BENCHMARK(BM_EnsemblePower)->Unit(benchmark::kMillisecond);

void BM_Kappa(benchmark::State& state) {
  fluorescence::KappaConfig cfg;
  cfg.points = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fluorescence::kappa(kRates, cfg));
}
BENCHMARK(BM_Kappa)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
