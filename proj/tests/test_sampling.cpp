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

#include "supermeasure/sampling.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "supermeasure/chsh.hpp"
#include "supermeasure/errors.hpp"
#include "supermeasure/measure.hpp"
#include "supermeasure/types.hpp"

namespace supermeasure {
namespace {

Measure four_sectors(std::size_t grid = kDefaultGridCells) {
  return Measure::uniform(
      std::vector<SettingPair>(kAllSettingPairs.begin(),
                               kAllSettingPairs.end()),
      grid);
}

Distribution flat_distribution(const Measure& mu) {
  return normalize([](const StateSpacePoint&) { return 1.0; }, mu);
}

TEST_CASE("sampled flat space has the flat mean") {
  const Measure mu = four_sectors();
  const SampledSpace space = sample_space(flat_distribution(mu), 1000000, 1);
  double mean = 0.0;
  for (const StateSpacePoint& p : space.atoms()) mean += p.lambda;
  mean /= static_cast<double>(space.size());
  CHECK(mean == doctest::Approx(0.5).epsilon(0.004));
}

TEST_CASE("sampling respects setting-bound supports exactly") {
  const Measure mu = Measure::uniform(
      {SettingPair{0, 0}, SettingPair{0, 1}}, kDefaultGridCells);
  const Distribution rho = normalize(
      [](const StateSpacePoint& pt) {
        const bool low = pt.settings == SettingPair{0, 0};
        return (low ? pt.lambda < 0.5 : pt.lambda >= 0.5) ? 1.0 : 0.0;
      },
      mu);
  const SampledSpace space = sample_space(rho, 50000, 7);
  for (const StateSpacePoint& p : space.atoms()) {
    if (p.settings == SettingPair{0, 0}) {
      CHECK(p.lambda < 0.5);
    } else {
      CHECK(p.lambda >= 0.5);
    }
  }
}

TEST_CASE("a single-atom space answers zero or one") {
  const Measure mu = four_sectors();
  const SampledSpace space = sample_space(flat_distribution(mu), 1, 3);
  CHECK(space.size() == 1);
  CHECK(space.atom_weight() == 1.0);
  const double p = empirical_probability(
      space, [](const StateSpacePoint& pt) { return pt.lambda < 0.5; });
  CHECK((p == 0.0 || p == 1.0));
}

TEST_CASE("empirical probability of the full space is one") {
  const Measure mu = four_sectors();
  const SampledSpace space = sample_space(flat_distribution(mu), 1000, 5);
  CHECK(empirical_probability(
            space, [](const StateSpacePoint&) { return true; }) == 1.0);
}

TEST_CASE("flat law puts half its atoms on the left") {
  const Measure mu = four_sectors();
  const SampledSpace space = sample_space(flat_distribution(mu), 1000000, 11);
  const double p = empirical_probability(
      space, [](const StateSpacePoint& pt) { return pt.lambda < 0.5; });
  CHECK(p == doctest::Approx(0.5).epsilon(0.006));
}

TEST_CASE("linear law puts a quarter of its atoms on the left") {
  const Measure mu = four_sectors();
  const Distribution rho =
      normalize([](const StateSpacePoint& pt) { return pt.lambda; }, mu);
  const SampledSpace space = sample_space(rho, 1000000, 13);
  const double p = empirical_probability(
      space, [](const StateSpacePoint& pt) { return pt.lambda < 0.5; });
  CHECK(p == doctest::Approx(0.25).epsilon(0.012));
}

TEST_CASE("sampled and exact interval masses agree at the root-N rate") {
  const Measure mu = four_sectors();
  const Distribution rho =
      normalize([](const StateSpacePoint& pt) { return pt.lambda; }, mu);
  const BellDensity bd = bell_density(rho, mu);
  constexpr std::size_t kN = 250000;
  const SampledSpace space = sample_space(rho, kN, 17);
  const double bound = 3.0 / std::sqrt(static_cast<double>(kN));
  for (const double edge : {0.25, 0.5, 0.75}) {
    const SubsetPredicate subset = [edge](const StateSpacePoint& pt) {
      return pt.lambda < edge;
    };
    CHECK(std::abs(empirical_probability(space, subset) -
                   probability(bd, subset)) <= bound);
  }
}

TEST_CASE("sampling is a pure function of distribution, size, and seed") {
  const Measure mu = four_sectors();
  const Distribution rho = flat_distribution(mu);
  const SampledSpace a = sample_space(rho, 4096, 23);
  const SampledSpace b = sample_space(rho, 4096, 23);
  const SampledSpace c = sample_space(rho, 4096, 24);
  REQUIRE(a.size() == b.size());
  bool identical = true;
  bool differs_from_c = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    identical = identical && a.atoms()[i].lambda == b.atoms()[i].lambda &&
                a.atoms()[i].settings == b.atoms()[i].settings;
    differs_from_c =
        differs_from_c || a.atoms()[i].lambda != c.atoms()[i].lambda;
  }
  CHECK(identical);
  CHECK(differs_from_c);
}

TEST_CASE("rejection sampling draws from the same law") {
  const Measure mu = four_sectors();
  const Distribution rho =
      normalize([](const StateSpacePoint& pt) { return pt.lambda; }, mu);
  const SampledSpace space = sample_space_rejection(rho, 200000, 29, 2.0);
  const double p = empirical_probability(
      space, [](const StateSpacePoint& pt) { return pt.lambda < 0.5; });
  CHECK(p == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("rejection sampling refuses an understated density bound") {
  const Measure mu = four_sectors();
  const Distribution rho =
      normalize([](const StateSpacePoint& pt) { return pt.lambda; }, mu);
  CHECK_THROWS_AS(sample_space_rejection(rho, 1000, 31, 1.2), DomainError);
  CHECK_THROWS_AS(sample_space_rejection(rho, 1000, 31, 0.0), DomainError);
}

TEST_CASE("empty draws and empty predicates are rejected") {
  const Measure mu = four_sectors();
  const Distribution rho = flat_distribution(mu);
  CHECK_THROWS_AS(sample_space(rho, 0, 1), EmptySpaceError);
  const SampledSpace space = sample_space(rho, 10, 1);
  CHECK_THROWS_AS(empirical_probability(space, SubsetPredicate{}),
                  DomainError);
}

TEST_CASE("csv export carries one labeled row per atom") {
  const Measure mu = four_sectors();
  const SampledSpace space = sample_space(flat_distribution(mu), 25, 37);
  std::ostringstream out;
  space.to_csv(out);
  const std::string text = out.str();
  CHECK(text.rfind("lambda,setting_k,setting_l\n", 0) == 0);
  std::size_t rows = 0;
  for (const char c : text) rows += c == '\n' ? 1 : 0;
  CHECK(rows == 26);
}

TEST_CASE("setting-independent laws pass both audit gates") {
  const Measure mu = four_sectors();
  const SampledSpace space = sample_space(flat_distribution(mu), 40000, 41);
  const SiAudit audit = si_audit(space);
  CHECK(audit.physical_si.verdict == "fail-to-reject");
  CHECK(audit.bell_si.verdict == "fail-to-reject");
}

TEST_CASE("setting-bound supports are flagged with a full-range statistic") {
  const Measure mu = Measure::uniform(
      {SettingPair{0, 0}, SettingPair{0, 1}}, kDefaultGridCells);
  const Distribution rho = normalize(
      [](const StateSpacePoint& pt) {
        const bool low = pt.settings == SettingPair{0, 0};
        return (low ? pt.lambda < 0.5 : pt.lambda >= 0.5) ? 1.0 : 0.0;
      },
      mu);
  const SampledSpace space = sample_space(rho, 40000, 43);
  const SiAudit audit = si_audit(space);
  CHECK(audit.bell_si.verdict == "reject");
  CHECK(audit.bell_si.statistic == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("model-induced law fails the conditional gate but not the bare one") {
  const SupermeasuredModel model =
      build_model(optimal_chsh_angles(), TwoQubitState::singlet());
  const Distribution rho = model_lambda_distribution(model);
  const SampledSpace space = sample_space(rho, 40000, 47);
  const SiAudit audit = si_audit(space);
  CHECK(audit.physical_si.verdict == "fail-to-reject");
  CHECK(audit.bell_si.verdict == "reject");
  CHECK(audit.bell_si.p_value < 1e-12);
}

TEST_CASE("auditing a single-sector space is refused") {
  const Measure mu = Measure::uniform({SettingPair{0, 0}});
  const SampledSpace space = sample_space(flat_distribution(mu), 200, 53);
  CHECK_THROWS_AS(si_audit(space), InsufficientDataError);
}

}  // namespace
}  // namespace supermeasure
