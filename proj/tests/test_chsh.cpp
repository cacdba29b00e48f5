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

#include "supermeasure/chsh.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "supermeasure/errors.hpp"
#include "supermeasure/measure.hpp"
#include "supermeasure/quantum.hpp"
#include "supermeasure/rng.hpp"
#include "supermeasure/stats.hpp"
#include "supermeasure/types.hpp"

namespace supermeasure {
namespace {

constexpr double kPi = 3.14159265358979323846;

SupermeasuredModel optimal_model() {
  return build_model(optimal_chsh_angles(), TwoQubitState::singlet());
}

// An ensemble whose draws all sit in one outcome cell of the given pair.
Ensemble single_cell_ensemble(SettingPair pair, int outcome_a, int outcome_b,
                              std::size_t n) {
  std::vector<HiddenVariableDraw> draws;
  draws.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    draws.push_back(HiddenVariableDraw{
        static_cast<double>(i) / static_cast<double>(n),
        SubspaceLabel{outcome_a, outcome_b, pair}});
  }
  return Ensemble(std::move(draws), pair, 0);
}

TEST_CASE("aligned settings forbid equal outcomes in the model weights") {
  const MeasurementAngle t{0.4};
  const SupermeasuredModel model = build_model(
      ChshAngles{t, MeasurementAngle{t.radians + kPi / 2.0}, t,
                 MeasurementAngle{t.radians + kPi / 4.0}},
      TwoQubitState::singlet());
  const SettingPair aligned{0, 0};
  CHECK(model.weight(SubspaceLabel{+1, +1, aligned}) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(model.weight(SubspaceLabel{-1, -1, aligned}) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(model.weight(SubspaceLabel{+1, -1, aligned}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(model.weight(SubspaceLabel{-1, +1, aligned}) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("orthogonal settings weight all four outcome cells equally") {
  const SupermeasuredModel model = build_model(
      ChshAngles{MeasurementAngle{0.0}, MeasurementAngle{1.0},
                 MeasurementAngle{kPi / 2.0}, MeasurementAngle{2.0}},
      TwoQubitState::singlet());
  for (const double w : model.cell_weights(SettingPair{0, 0})) {
    CHECK(w == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("model weights reproduce the oracle probabilities") {
  const SupermeasuredModel model = optimal_model();
  const ChshAngles angles = optimal_chsh_angles();
  for (const SettingPair& pair : kAllSettingPairs) {
    const OutcomeProbabilities p = outcome_probabilities(
        TwoQubitState::singlet(), angles.alice(pair.k), angles.bob(pair.l));
    const std::array<double, 4> w = model.cell_weights(pair);
    const std::array<double, 4> expected = p.as_array();
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(w[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("per-pair weights always form a probability vector") {
  const SupermeasuredModel model = optimal_model();
  for (const SettingPair& pair : kAllSettingPairs) {
    double total = 0.0;
    for (const double w : model.cell_weights(pair)) {
      CHECK(w >= 0.0);
      total += w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("zero-weight cells receive no draws at all") {
  const MeasurementAngle t{1.2};
  const SupermeasuredModel model = build_model(
      ChshAngles{t, MeasurementAngle{0.3}, t, MeasurementAngle{0.9}},
      TwoQubitState::singlet());
  const Ensemble ensemble =
      sample_ensemble(model, SettingPair{0, 0}, 1000000, 99);
  for (const HiddenVariableDraw& d : ensemble.draws()) {
    const bool anticorrelated = d.label.outcome_a != d.label.outcome_b;
    CHECK(anticorrelated);
  }
}

TEST_CASE("balanced weights produce multinomial cell counts") {
  const SupermeasuredModel model = build_model(
      ChshAngles{MeasurementAngle{0.0}, MeasurementAngle{1.0},
                 MeasurementAngle{kPi / 2.0}, MeasurementAngle{2.0}},
      TwoQubitState::singlet());
  const Ensemble ensemble =
      sample_ensemble(model, SettingPair{0, 0}, 1000000, 7);
  std::array<std::size_t, 4> counts{};
  for (const HiddenVariableDraw& d : ensemble.draws()) {
    ++counts[static_cast<std::size_t>(
        outcome_index(d.label.outcome_a, d.label.outcome_b))];
  }
  for (const std::size_t c : counts) {
    CHECK(std::abs(static_cast<double>(c) - 250000.0) <= 1300.0);
  }
}

TEST_CASE("ensemble u-values pass a uniformity screen across seeds") {
  const SupermeasuredModel model = optimal_model();
  constexpr std::size_t kSeeds = 100;
  constexpr std::size_t kDraws = 100000;
  constexpr std::size_t kBins = 100;
  std::size_t rejections = 0;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const Ensemble ensemble =
        sample_ensemble(model, SettingPair{1, 0}, kDraws, seed);
    std::vector<std::uint64_t> counts(kBins, 0);
    for (const HiddenVariableDraw& d : ensemble.draws()) {
      const auto bin =
          static_cast<std::size_t>(d.u * static_cast<double>(kBins));
      ++counts[std::min(bin, kBins - 1)];
    }
    const std::vector<double> expected(
        kBins, static_cast<double>(kDraws) / static_cast<double>(kBins));
    if (chi_square_gof(counts, expected).verdict == "reject") ++rejections;
  }
  CHECK(rejections <= 5);
}

TEST_CASE("outcomes are read from the label, never invented") {
  const HiddenVariableDraw draw{0.5, SubspaceLabel{+1, -1, SettingPair{0, 1}}};
  CHECK(outcome(draw, Side::A, 0) == +1);
  CHECK(outcome(draw, Side::B, 1) == -1);
  CHECK_THROWS_AS(outcome(draw, Side::B, 0), CounterfactualError);
  CHECK_THROWS_AS(outcome(draw, Side::A, 1), CounterfactualError);
  CHECK_THROWS_AS(outcome(draw, Side::A, 7), DomainError);
}

TEST_CASE("an ensemble pinned to one anticorrelated cell has expectation -1") {
  const Ensemble ensemble =
      single_cell_ensemble(SettingPair{0, 1}, +1, -1, 1000);
  CHECK(estimate_expectation(ensemble) == -1.0);
}

TEST_CASE("aligned-setting ensembles are exactly anticorrelated") {
  const MeasurementAngle t{0.4};
  const SupermeasuredModel model = build_model(
      ChshAngles{t, MeasurementAngle{t.radians + kPi / 2.0}, t,
                 MeasurementAngle{t.radians + kPi / 4.0}},
      TwoQubitState::singlet());
  const Ensemble ensemble =
      sample_ensemble(model, SettingPair{0, 0}, 1000000, 3);
  CHECK(estimate_expectation(ensemble) == -1.0);
}

TEST_CASE("an eighth-turn ensemble estimates the oracle correlation") {
  const SupermeasuredModel model = build_model(
      ChshAngles{MeasurementAngle{kPi / 4.0}, MeasurementAngle{1.0},
                 MeasurementAngle{0.0}, MeasurementAngle{2.0}},
      TwoQubitState::singlet());
  const Ensemble ensemble =
      sample_ensemble(model, SettingPair{0, 0}, 1000000, 5);
  CHECK(estimate_expectation(ensemble) ==
        doctest::Approx(-std::sqrt(2.0) / 2.0).epsilon(0.003));
}

TEST_CASE("four all-plus ensembles give the boundary statistic two") {
  const double s = chsh_statistic(
      single_cell_ensemble(SettingPair{0, 0}, +1, +1, 100),
      single_cell_ensemble(SettingPair{0, 1}, +1, +1, 100),
      single_cell_ensemble(SettingPair{1, 0}, +1, +1, 100),
      single_cell_ensemble(SettingPair{1, 1}, +1, +1, 100));
  CHECK(s == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("ensembles may be passed in any setting order") {
  const Ensemble e00 = single_cell_ensemble(SettingPair{0, 0}, +1, +1, 50);
  const Ensemble e01 = single_cell_ensemble(SettingPair{0, 1}, +1, -1, 50);
  const Ensemble e10 = single_cell_ensemble(SettingPair{1, 0}, +1, +1, 50);
  const Ensemble e11 = single_cell_ensemble(SettingPair{1, 1}, +1, +1, 50);
  const double forward = chsh_statistic(e00, e01, e10, e11);
  const double shuffled = chsh_statistic(e11, e10, e01, e00);
  CHECK(forward == shuffled);
  CHECK(forward == doctest::Approx(-1.0 + 1.0 - 1.0 + 1.0).epsilon(1e-12));
}

TEST_CASE("a missing or duplicated setting pair is a set error") {
  const Ensemble e00 = single_cell_ensemble(SettingPair{0, 0}, +1, +1, 50);
  const Ensemble e01 = single_cell_ensemble(SettingPair{0, 1}, +1, +1, 50);
  const Ensemble e10 = single_cell_ensemble(SettingPair{1, 0}, +1, +1, 50);
  CHECK_THROWS_AS(chsh_statistic(e00, e01, e10, e10), EnsembleSetError);
}

TEST_CASE("full-scale run lands on the quantum maximum") {
  const SupermeasuredModel model = optimal_model();
  std::vector<Ensemble> ensembles;
  for (const SettingPair& pair : kAllSettingPairs) {
    ensembles.push_back(sample_ensemble(model, pair, 1000000, 42));
  }
  const double s = chsh_statistic(ensembles[0], ensembles[1], ensembles[2],
                                  ensembles[3]);
  CHECK(std::abs(s) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(0.004));
}

TEST_CASE("product-state models stay within the classical bound") {
  const TwoQubitState zz = TwoQubitState::product(
      {std::complex<double>{1.0, 0.0}, std::complex<double>{0.0, 0.0}},
      {std::complex<double>{1.0, 0.0}, std::complex<double>{0.0, 0.0}});
  const CounterRng rng(31);
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const ChshAngles angles{
        MeasurementAngle{2.0 * kPi * rng.uniform_at(4 * trial)},
        MeasurementAngle{2.0 * kPi * rng.uniform_at(4 * trial + 1)},
        MeasurementAngle{2.0 * kPi * rng.uniform_at(4 * trial + 2)},
        MeasurementAngle{2.0 * kPi * rng.uniform_at(4 * trial + 3)}};
    const SupermeasuredModel model = build_model(angles, zz);
    std::vector<Ensemble> ensembles;
    for (const SettingPair& pair : kAllSettingPairs) {
      ensembles.push_back(sample_ensemble(model, pair, 250000, trial));
    }
    const double s = chsh_statistic(ensembles[0], ensembles[1],
                                    ensembles[2], ensembles[3]);
    CHECK(std::abs(s) <= 2.01);
  }
}

TEST_CASE("u-marginals are indistinguishable across setting choices") {
  const SupermeasuredModel model = optimal_model();
  std::vector<Ensemble> ensembles;
  for (const SettingPair& pair : kAllSettingPairs) {
    ensembles.push_back(sample_ensemble(model, pair, 100000, 8));
  }
  const TestReport report = physical_si_test(ensembles[0], ensembles[1],
                                             ensembles[2], ensembles[3]);
  CHECK(report.verdict == "fail-to-reject");
  CHECK(report.method == "ks-pairwise-bonferroni");
}

TEST_CASE("a tilted u-marginal in one ensemble is caught decisively") {
  const SupermeasuredModel model = optimal_model();
  std::vector<Ensemble> ensembles;
  for (const SettingPair& pair : {SettingPair{0, 0}, SettingPair{0, 1},
                                  SettingPair{1, 0}}) {
    ensembles.push_back(sample_ensemble(model, pair, 100000, 9));
  }
  // Fourth ensemble with u drawn from the square-root law instead.
  const CounterRng rng(10);
  std::vector<HiddenVariableDraw> draws;
  for (std::size_t i = 0; i < 100000; ++i) {
    draws.push_back(HiddenVariableDraw{
        std::sqrt(rng.uniform_at(i)),
        SubspaceLabel{+1, -1, SettingPair{1, 1}}});
  }
  const Ensemble tilted(std::move(draws), SettingPair{1, 1}, 10);
  const TestReport report = physical_si_test(ensembles[0], ensembles[1],
                                             ensembles[2], tilted);
  CHECK(report.verdict == "reject");
  CHECK(report.p_value < 1e-6);
}

TEST_CASE("identical per-pair weights show no conditional violation") {
  std::array<double, 16> weights{};
  const std::array<double, 4> column = {0.1, 0.2, 0.3, 0.4};
  for (int oi = 0; oi < 4; ++oi) {
    for (int si = 0; si < 4; ++si) {
      weights[static_cast<std::size_t>(4 * oi + si)] =
          column[static_cast<std::size_t>(oi)];
    }
  }
  const SupermeasuredModel model(optimal_chsh_angles(),
                                 TwoQubitState::singlet(), weights);
  CHECK(bell_si_violation(model) == 0.0);
}

TEST_CASE("conditional weight vectors of the tuned model differ strongly") {
  const SupermeasuredModel model = optimal_model();
  const double tv = bell_si_violation(model);
  CHECK(tv > 0.1);
  // The worst pair puts the two anticorrelated cells against the aligned
  // ones; the exact distance follows from the oracle weights.
  double expected = 0.0;
  for (std::size_t a = 0; a < kAllSettingPairs.size(); ++a) {
    for (std::size_t b = a + 1; b < kAllSettingPairs.size(); ++b) {
      const std::array<double, 4> wa = model.cell_weights(kAllSettingPairs[a]);
      const std::array<double, 4> wb = model.cell_weights(kAllSettingPairs[b]);
      double half_l1 = 0.0;
      for (std::size_t i = 0; i < 4; ++i) {
        half_l1 += 0.5 * std::abs(wa[i] - wb[i]);
      }
      expected = std::max(expected, half_l1);
    }
  }
  CHECK(tv == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("disjoint per-setting supports make the indicator distance one") {
  const SupermeasuredModel model = optimal_model();
  CHECK(support_indicator_tv(model) == 1.0);
}

TEST_CASE("model weights must be per-pair normalized") {
  std::array<double, 16> weights{};
  weights[0] = 0.5;  // pair (0,0) sums to 0.5, the rest to 0.
  CHECK_THROWS_AS(SupermeasuredModel(optimal_chsh_angles(),
                                     TwoQubitState::singlet(), weights),
                  ModelError);
}

TEST_CASE("ensembles refuse draws labeled with a different pair") {
  std::vector<HiddenVariableDraw> draws;
  draws.push_back(
      HiddenVariableDraw{0.5, SubspaceLabel{+1, +1, SettingPair{0, 0}}});
  CHECK_THROWS_AS(Ensemble(std::move(draws), SettingPair{1, 1}, 0),
                  ModelError);
}

TEST_CASE("ensemble csv export carries its setting pair on every row") {
  const Ensemble ensemble =
      single_cell_ensemble(SettingPair{1, 0}, -1, +1, 3);
  std::ostringstream out;
  ensemble.to_csv(out);
  const std::string text = out.str();
  CHECK(text.rfind("u,outcome_a,outcome_b,k,l\n", 0) == 0);
  CHECK(text.find(",-1,1,1,0\n") != std::string::npos);
}

TEST_CASE("the model projects to a four-level hidden-variable density") {
  const SupermeasuredModel model = optimal_model();
  const Distribution rho = model_lambda_distribution(model);
  const BellDensity bd = bell_density(rho, rho.base_measure());
  for (const SettingPair& pair : kAllSettingPairs) {
    const std::array<double, 4> w = model.cell_weights(pair);
    // Quarter interval i of [0,1) carries the weight of outcome cell i.
    const LambdaDistribution cond = conditional(bd, pair);
    for (std::size_t i = 0; i < 4; ++i) {
      const double lo = 0.25 * static_cast<double>(i);
      const double hi = lo + 0.25;
      const double mass = cond.probability(
          [lo, hi](double l) { return l >= lo && l < hi; });
      CHECK(mass == doctest::Approx(w[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("the weighted-cell density matches the model conditionals") {
  const SupermeasuredModel model = optimal_model();
  const BellDensity bd = model_bell_density(model);
  for (const SettingPair& pair : kAllSettingPairs) {
    const std::array<double, 4> expected = model.cell_weights(pair);
    const std::array<double, 4> actual = conditional_cell_weights(bd, pair);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(actual[i] == doctest::Approx(expected[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("ensemble sampling is deterministic per seed") {
  const SupermeasuredModel model = optimal_model();
  const Ensemble a = sample_ensemble(model, SettingPair{0, 0}, 2048, 77);
  const Ensemble b = sample_ensemble(model, SettingPair{0, 0}, 2048, 77);
  REQUIRE(a.size() == b.size());
  bool identical = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    identical = identical && a.draws()[i].u == b.draws()[i].u &&
                a.draws()[i].label == b.draws()[i].label;
  }
  CHECK(identical);
}

}  // namespace
}  // namespace supermeasure
