// Copyright 2026 The Supermeasure Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Throughput of the hot paths: ensemble sampling, the two-qubit oracle,
// exact superposition arithmetic, and the fixed-step integrator. Counters
// are items per second so regressions read directly as draw rates.

#include <cmath>
#include <cstdint>

#include "benchmark/benchmark.h"
#include "supermeasure/chsh.hpp"
#include "supermeasure/lorenz.hpp"
#include "supermeasure/measure.hpp"
#include "supermeasure/quantum.hpp"
#include "supermeasure/rational.hpp"
#include "supermeasure/rng.hpp"
#include "supermeasure/sampling.hpp"

namespace {

using namespace supermeasure;

void BM_SampleEnsemble(benchmark::State& state) {
  const SupermeasuredModel model =
      build_model(optimal_chsh_angles(), TwoQubitState::singlet());
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample_ensemble(model, SettingPair{0, 0}, n, seed++));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SampleEnsemble)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_SampleSpace(benchmark::State& state) {
  const SupermeasuredModel model =
      build_model(optimal_chsh_angles(), TwoQubitState::singlet());
  const Distribution rho = model_lambda_distribution(model);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_space(rho, n, seed++));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SampleSpace)->Arg(1 << 12)->Arg(1 << 16);

void BM_OutcomeProbabilities(benchmark::State& state) {
  const TwoQubitState singlet = TwoQubitState::singlet();
  const CounterRng rng(17);
  std::uint64_t i = 0;
  for (auto _ : state) {
    const MeasurementAngle a{rng.uniform_at(2 * i) * 6.283185307179586};
    const MeasurementAngle b{rng.uniform_at(2 * i + 1) * 6.283185307179586};
    ++i;
    benchmark::DoNotOptimize(outcome_probabilities(singlet, a, b));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_OutcomeProbabilities);

void BM_ChshStatistic(benchmark::State& state) {
  const SupermeasuredModel model =
      build_model(optimal_chsh_angles(), TwoQubitState::singlet());
  const auto n = static_cast<std::size_t>(state.range(0));
  const Ensemble e00 = sample_ensemble(model, SettingPair{0, 0}, n, 1);
  const Ensemble e01 = sample_ensemble(model, SettingPair{0, 1}, n, 1);
  const Ensemble e10 = sample_ensemble(model, SettingPair{1, 0}, n, 1);
  const Ensemble e11 = sample_ensemble(model, SettingPair{1, 1}, n, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chsh_statistic(e00, e01, e10, e11));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(4 * n));
}
BENCHMARK(BM_ChshStatistic)->Arg(1 << 16);

void BM_SuperpositionExact(benchmark::State& state) {
  // Mixed workload: one branch lands back in the set, one leaves through
  // the magnitude gate, one through the irrational cross term.
  const RationalAmplitude a1(BigInt(1), RationalAngle(), BigInt(12));
  const RationalAmplitude b1(BigInt(3), RationalAngle(1, 4), BigInt(12));
  const RationalAmplitude a2(BigInt(3), RationalAngle(), BigInt(4));
  const RationalAmplitude b2(BigInt(3), RationalAngle(), BigInt(4));
  const RationalAmplitude a3(BigInt(1), RationalAngle(), BigInt(12));
  const RationalAmplitude b3(BigInt(1), RationalAngle(1, 8), BigInt(12));
  for (auto _ : state) {
    benchmark::DoNotOptimize(superposition_in_cp(a1, b1));
    benchmark::DoNotOptimize(superposition_in_cp(a2, b2));
    benchmark::DoNotOptimize(superposition_in_cp(a3, b3));
  }
  state.SetItemsProcessed(state.iterations() * 3);
}
BENCHMARK(BM_SuperpositionExact);

void BM_ClosureFailureRate(benchmark::State& state) {
  const auto trials = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(closure_failure_rate(101, trials, seed++));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(trials));
}
BENCHMARK(BM_ClosureFailureRate)->Arg(1 << 10);

void BM_LorenzIntegrate(benchmark::State& state) {
  const LorenzParams params;
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate(params, Vec3{1.0, 1.0, 1.0}, 0.02, steps));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_LorenzIntegrate)->Arg(1 << 12)->Arg(1 << 16);

void BM_CounterRngUniform(benchmark::State& state) {
  const CounterRng rng(99);
  std::uint64_t i = 0;
  double acc = 0.0;
  for (auto _ : state) {
    acc += rng.uniform_at(i++);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CounterRngUniform);

}  // namespace

BENCHMARK_MAIN();
