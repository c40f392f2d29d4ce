// Copyright 2026 The hamlearn Authors
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

#include "hamlearn/estimators.hpp"

using namespace hamlearn;

namespace {

struct SteadyFixture {
  SpinChainSpec spec;
  ModelSpace model;
  DensityMatrix rho;
  std::vector<PauliString> inputs;

  explicit SteadyFixture(std::size_t n)
      : spec(SpinChainSpec::uniform(n, {0.5, 0.0, -2.55}, 0.25, 0.05, 0.0)),
        model(ModelSpace::build(n, 2)),
        rho(steady_state(build_thermal_generator(spec, JumpBasisMode::Pauli))),
        inputs(enumerate_basis({n, std::min<std::size_t>(4, n), true})) {}
};

}  // namespace

static void AssembleSteady(benchmark::State& state) {
  const SteadyFixture fix(std::size_t(state.range(0)));
  for (auto _ : state) {
    auto sys = assemble_steady(fix.rho, fix.inputs, fix.model);
    benchmark::DoNotOptimize(sys);
  }
  state.SetLabel(std::to_string(fix.model.dimension()) + " columns");
}
BENCHMARK(AssembleSteady)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void SvdNullSolve(benchmark::State& state) {
  const SteadyFixture fix(std::size_t(state.range(0)));
  const auto sys = assemble_steady(fix.rho, fix.inputs, fix.model);
  for (auto _ : state) {
    auto report = svd_null_estimator(sys);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(SvdNullSolve)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void NoiseInjection(benchmark::State& state) {
  const SteadyFixture fix(3);
  const auto sys = assemble_steady(fix.rho, fix.inputs, fix.model);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto noisy = inject_noise(sys, 1e-4, ++seed);
    benchmark::DoNotOptimize(noisy);
  }
}
BENCHMARK(NoiseInjection);

static void PsdConstrainedSolve(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  const SteadyFixture fix(n);
  const auto gen = build_thermal_generator(fix.spec, JumpBasisMode::Pauli);
  const auto states = conjugated_state_set(fix.rho, enumerate_basis({n, 1, true}));
  const auto inputs = enumerate_basis({n, 2, true});
  const auto sys = assemble_dynamical(states, inputs, gen, 1e-3 / 2.55, 2, fix.model);
  for (auto _ : state) {
    auto report = psd_constrained_estimator(sys, fix.model);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(PsdConstrainedSolve)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
