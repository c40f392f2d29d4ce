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

#include <random>

#include "hamlearn/pauli.hpp"

using namespace hamlearn;

namespace {

std::vector<PauliString> random_strings(std::size_t n_sites, std::size_t count) {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> dist(0, 3);
  std::vector<PauliString> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Pauli> symbols(n_sites);
    for (auto& s : symbols) s = static_cast<Pauli>(dist(rng));
    out.emplace_back(std::move(symbols));
  }
  return out;
}

}  // namespace

static void PauliMul(benchmark::State& state) {
  const auto strings = random_strings(std::size_t(state.range(0)), 256);
  std::size_t i = 0;
  for (auto _ : state) {
    auto prod = pauli_mul(strings[i % 256], strings[(i + 1) % 256]);
    benchmark::DoNotOptimize(prod);
    ++i;
  }
}
BENCHMARK(PauliMul)->Arg(5)->Arg(10)->Arg(20);

static void Commutator(benchmark::State& state) {
  const auto strings = random_strings(std::size_t(state.range(0)), 256);
  std::size_t i = 0;
  for (auto _ : state) {
    auto c = commutator(strings[i % 256], strings[(i + 1) % 256]);
    benchmark::DoNotOptimize(c);
    ++i;
  }
}
BENCHMARK(Commutator)->Arg(5)->Arg(10);

static void EnumerateBasis(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  for (auto _ : state) {
    auto basis = enumerate_basis({n, std::min<std::size_t>(4, n), true});
    benchmark::DoNotOptimize(basis);
  }
}
BENCHMARK(EnumerateBasis)->Arg(3)->Arg(5)->Arg(6);

static void ToDense(benchmark::State& state) {
  const auto strings = random_strings(std::size_t(state.range(0)), 16);
  std::size_t i = 0;
  for (auto _ : state) {
    auto m = to_dense(strings[i % 16]);
    benchmark::DoNotOptimize(m);
    ++i;
  }
}
BENCHMARK(ToDense)->Arg(3)->Arg(5)->Arg(6);

BENCHMARK_MAIN();
