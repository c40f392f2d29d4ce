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

#include "hamlearn/lindblad.hpp"

using namespace hamlearn;

namespace {

SpinChainSpec reference_chain(std::size_t n) {
  return SpinChainSpec::uniform(n, {0.5, 0.0, -2.55}, 0.25, 0.05, 0.0);
}

}  // namespace

static void BuildLiouvillian(benchmark::State& state) {
  const auto gen = build_thermal_generator(reference_chain(std::size_t(state.range(0))),
                                           JumpBasisMode::Pauli);
  for (auto _ : state) {
    auto L = liouvillian_matrix(gen);
    benchmark::DoNotOptimize(L);
  }
}
BENCHMARK(BuildLiouvillian)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void SteadyState(benchmark::State& state) {
  const auto gen = build_thermal_generator(reference_chain(std::size_t(state.range(0))),
                                           JumpBasisMode::Pauli);
  for (auto _ : state) {
    auto rho = steady_state(gen);
    benchmark::DoNotOptimize(rho);
  }
}
BENCHMARK(SteadyState)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void PropagatorBuild(benchmark::State& state) {
  const auto gen = build_thermal_generator(reference_chain(std::size_t(state.range(0))),
                                           JumpBasisMode::Pauli);
  for (auto _ : state) {
    Propagator step(gen, 1e-3);
    benchmark::DoNotOptimize(step);
  }
}
BENCHMARK(PropagatorBuild)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void PropagatorApply(benchmark::State& state) {
  const auto gen = build_thermal_generator(reference_chain(std::size_t(state.range(0))),
                                           JumpBasisMode::Pauli);
  const auto rho = steady_state(gen);
  const Propagator step(gen, 1e-3);
  for (auto _ : state) {
    auto out = step.apply_matrix(rho.matrix());
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(PropagatorApply)->Arg(2)->Arg(3)->Arg(4);

BENCHMARK_MAIN();
