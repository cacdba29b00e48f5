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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <thread>
#include <utility>

#include "format_util.hpp"
#include "supermeasure/errors.hpp"
#include "supermeasure/rng.hpp"

namespace supermeasure {
namespace {

constexpr double kPairSumTolerance = 1e-12;

const std::array<std::pair<int, int>, 4> kOutcomeOrder = {
    std::pair<int, int>{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};

}  // namespace

SupermeasuredModel::SupermeasuredModel(ChshAngles angles, TwoQubitState state,
                                       std::array<double, 16> weights)
    : angles_(angles), state_(std::move(state)), weights_(weights) {
  validate(state_);
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ModelError("SupermeasuredModel: weights must be non-negative");
    }
  }
  for (const SettingPair& pair : kAllSettingPairs) {
    double sum = 0.0;
    for (const auto& [a, b] : kOutcomeOrder) {
      sum += weights_[static_cast<std::size_t>(
          cell_index(SubspaceLabel{a, b, pair}))];
    }
    if (std::abs(sum - 1.0) > kPairSumTolerance) {
      throw ModelError(
          "SupermeasuredModel: cell weights for a setting pair must sum to 1");
    }
  }
}

double SupermeasuredModel::weight(const SubspaceLabel& label) const {
  validate(label);
  return weights_[static_cast<std::size_t>(cell_index(label))];
}

std::array<double, 4> SupermeasuredModel::cell_weights(
    const SettingPair& settings) const {
  validate(settings);
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < kOutcomeOrder.size(); ++i) {
    const auto& [a, b] = kOutcomeOrder[i];
    out[i] = weights_[static_cast<std::size_t>(
        cell_index(SubspaceLabel{a, b, settings}))];
  }
  return out;
}

SupermeasuredModel build_model(const ChshAngles& angles,
                               const TwoQubitState& state) {
  std::array<double, 16> weights{};
  for (const SettingPair& pair : kAllSettingPairs) {
    const OutcomeProbabilities probs = outcome_probabilities(
        state, angles.alice(pair.k), angles.bob(pair.l));
    for (const auto& [a, b] : kOutcomeOrder) {
      weights[static_cast<std::size_t>(cell_index(SubspaceLabel{a, b, pair}))] =
          probs.at(a, b);
    }
  }
  return SupermeasuredModel(angles, state, weights);
}

int outcome(const HiddenVariableDraw& draw, Side side, int setting_index) {
  validate(draw.label);
  if (setting_index != 0 && setting_index != 1) {
    throw DomainError("outcome: setting index must be 0 or 1");
  }
  if (side == Side::A) {
    if (setting_index != draw.label.settings.k) {
      throw CounterfactualError(
          "outcome: this hidden value never occurs with Alice setting " +
          std::to_string(setting_index));
    }
    return draw.label.outcome_a;
  }
  if (setting_index != draw.label.settings.l) {
    throw CounterfactualError(
        "outcome: this hidden value never occurs with Bob setting " +
        std::to_string(setting_index));
  }
  return draw.label.outcome_b;
}

Ensemble::Ensemble(std::vector<HiddenVariableDraw> draws, SettingPair settings,
                   std::uint64_t seed)
    : draws_(std::move(draws)), settings_(settings), seed_(seed) {
  validate(settings_);
  for (const HiddenVariableDraw& d : draws_) {
    validate(d.label);
    if (!(d.u >= 0.0 && d.u <= 1.0)) {
      throw DomainError("Ensemble: u outside [0,1]");
    }
    if (!(d.label.settings == settings_)) {
      throw ModelError("Ensemble: draw labeled with a different setting pair");
    }
  }
}

void Ensemble::to_csv(std::ostream& out) const {
  out << "u,outcome_a,outcome_b,k,l\n";
  for (const HiddenVariableDraw& d : draws_) {
    out << detail::double_to_string(d.u) << ',' << d.label.outcome_a << ','
        << d.label.outcome_b << ',' << d.label.settings.k << ','
        << d.label.settings.l << '\n';
  }
}

Ensemble sample_ensemble(const SupermeasuredModel& model,
                         const SettingPair& settings, std::size_t n,
                         std::uint64_t seed) {
  validate(settings);
  if (n == 0) throw InsufficientDataError("sample_ensemble: N must be >= 1");

  const std::array<double, 4> weights = model.cell_weights(settings);
  std::array<double, 4> cdf{};
  double acc = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    acc += weights[i];
    cdf[i] = acc;
  }
  if (!(acc > 0.0)) {
    throw ModelError("sample_ensemble: all cell weights are zero");
  }
  cdf[3] = acc;  // guard against rounding; normalized below via division
  for (double& c : cdf) c /= acc;
  cdf[3] = 1.0;

  const CounterRng rng(derive_seed(
      seed, "ensemble", static_cast<std::uint64_t>(setting_index(settings))));
  std::vector<HiddenVariableDraw> draws(n);
  auto fill = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double pick = rng.uniform_at(2 * i);
      std::size_t cell = 0;
      while (cell < 3 && pick >= cdf[cell]) ++cell;
      const auto& [a, b] = kOutcomeOrder[cell];
      draws[i] = HiddenVariableDraw{rng.uniform_at(2 * i + 1),
                                    SubspaceLabel{a, b, settings}};
    }
  };
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(
          std::thread::hardware_concurrency(), n / 65536 + 1));
  if (workers == 1) {
    fill(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(n, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(fill, lo, hi);
    }
    for (std::thread& t : pool) t.join();
  }
  return Ensemble(std::move(draws), settings, seed);
}

double estimate_expectation(const Ensemble& ensemble) {
  if (ensemble.size() == 0) {
    throw InsufficientDataError("estimate_expectation: empty ensemble");
  }
  std::int64_t sum = 0;
  for (const HiddenVariableDraw& d : ensemble.draws()) {
    sum += static_cast<std::int64_t>(d.label.outcome_a) *
           static_cast<std::int64_t>(d.label.outcome_b);
  }
  return static_cast<double>(sum) / static_cast<double>(ensemble.size());
}

namespace {

// Places the four ensembles by their setting pair, throwing if a pair is
// duplicated or missing.
std::array<const Ensemble*, 4> index_by_pair(const Ensemble& e00,
                                             const Ensemble& e01,
                                             const Ensemble& e10,
                                             const Ensemble& e11) {
  std::array<const Ensemble*, 4> slots{};
  for (const Ensemble* e : {&e00, &e01, &e10, &e11}) {
    const std::size_t idx =
        static_cast<std::size_t>(setting_index(e->settings()));
    if (slots[idx] != nullptr) {
      throw EnsembleSetError(
          "chsh ensembles: setting pair (" + std::to_string(e->settings().k) +
          "," + std::to_string(e->settings().l) + ") appears twice");
    }
    slots[idx] = e;
  }
  for (std::size_t idx = 0; idx < slots.size(); ++idx) {
    if (slots[idx] == nullptr) {
      throw EnsembleSetError("chsh ensembles: setting pair (" +
                             std::to_string(idx / 2) + "," +
                             std::to_string(idx % 2) + ") missing");
    }
  }
  return slots;
}

}  // namespace

double chsh_statistic(const Ensemble& e00, const Ensemble& e01,
                      const Ensemble& e10, const Ensemble& e11) {
  const auto slots = index_by_pair(e00, e01, e10, e11);
  const double v00 = estimate_expectation(*slots[0]);
  const double v01 = estimate_expectation(*slots[1]);
  const double v10 = estimate_expectation(*slots[2]);
  const double v11 = estimate_expectation(*slots[3]);
  return -v00 + v10 + v01 + v11;
}

TestReport physical_si_test(const Ensemble& e00, const Ensemble& e01,
                            const Ensemble& e10, const Ensemble& e11,
                            double alpha) {
  const auto slots = index_by_pair(e00, e01, e10, e11);
  std::array<std::vector<double>, 4> u_values;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (slots[s]->size() == 0) {
      throw InsufficientDataError("physical_si_test: empty ensemble");
    }
    u_values[s].reserve(slots[s]->size());
    for (const HiddenVariableDraw& d : slots[s]->draws()) {
      u_values[s].push_back(d.u);
    }
    std::sort(u_values[s].begin(), u_values[s].end());
  }

  double worst_stat = 0.0;
  double min_p = 1.0;
  std::size_t comparisons = 0;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      const TestReport r = ks_two_sample_sorted(u_values[a], u_values[b]);
      worst_stat = std::max(worst_stat, r.statistic);
      min_p = std::min(min_p, r.p_value);
      ++comparisons;
    }
  }
  const double adjusted =
      std::min(1.0, min_p * static_cast<double>(comparisons));
  return make_report(worst_stat, adjusted, alpha, "ks-pairwise-bonferroni");
}

double bell_si_violation(const SupermeasuredModel& model) {
  double worst = 0.0;
  for (std::size_t a = 0; a < kAllSettingPairs.size(); ++a) {
    for (std::size_t b = a + 1; b < kAllSettingPairs.size(); ++b) {
      const auto wa = model.cell_weights(kAllSettingPairs[a]);
      const auto wb = model.cell_weights(kAllSettingPairs[b]);
      worst = std::max(
          worst, total_variation(std::vector<double>(wa.begin(), wa.end()),
                                 std::vector<double>(wb.begin(), wb.end())));
    }
  }
  return worst;
}

double support_indicator_tv(const SupermeasuredModel& model) {
  // Conditional distribution of the full hidden value over all 16 cells:
  // mass only on the cells of the conditioning pair.
  auto embedded = [&](const SettingPair& pair) {
    std::vector<double> v(16, 0.0);
    const auto w = model.cell_weights(pair);
    for (std::size_t i = 0; i < kOutcomeOrder.size(); ++i) {
      const auto& [a, b] = kOutcomeOrder[i];
      v[static_cast<std::size_t>(cell_index(SubspaceLabel{a, b, pair}))] =
          w[i];
    }
    return v;
  };
  // TV(P, Q) = 1 - sum_i min(p_i, q_i) for probability vectors. The min
  // form evaluates to exactly 1.0 when the supports are disjoint, which the
  // half-L1 form misses by rounding in the normalization.
  double worst = 0.0;
  for (std::size_t a = 0; a < kAllSettingPairs.size(); ++a) {
    for (std::size_t b = a + 1; b < kAllSettingPairs.size(); ++b) {
      const std::vector<double> va = embedded(kAllSettingPairs[a]);
      const std::vector<double> vb = embedded(kAllSettingPairs[b]);
      double overlap = 0.0;
      for (std::size_t i = 0; i < va.size(); ++i) {
        overlap += std::min(va[i], vb[i]);
      }
      worst = std::max(worst, 1.0 - overlap);
    }
  }
  return worst;
}

BellDensity model_bell_density(const SupermeasuredModel& model,
                               std::size_t grid_cells) {
  const Measure mu = Measure::subspace_weighted(model.weights(), grid_cells);
  const Distribution flat =
      normalize([](const StateSpacePoint&) { return 1.0; }, mu);
  return bell_density(flat, mu);
}

Distribution model_lambda_distribution(const SupermeasuredModel& model,
                                       std::size_t grid_cells) {
  const Measure mu = Measure::uniform(
      std::vector<SettingPair>(kAllSettingPairs.begin(),
                               kAllSettingPairs.end()),
      grid_cells);
  const std::array<double, 16> weights = model.weights();
  DensityFn f = [weights](const StateSpacePoint& point) {
    int cell = static_cast<int>(point.lambda * 4.0);
    cell = std::min(cell, 3);
    const SettingPair pair = point.settings;
    const auto& [a, b] = kOutcomeOrder[static_cast<std::size_t>(cell)];
    return 4.0 *
           weights[static_cast<std::size_t>(
               cell_index(SubspaceLabel{a, b, pair}))];
  };
  return normalize(f, mu);
}

}  // namespace supermeasure
