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
// A hidden-variable model in which each hidden value is physical for
// exactly one measurement-setting pair. The hidden variable is a pair
// (u, label): u is uniform on [0,1] no matter which settings are chosen,
// so the bare distribution over hidden values carries no setting
// information, while the label partitions the space into sixteen disjoint
// cells whose measure weights equal the two-qubit outcome probabilities.
// Outcomes are read off the label deterministically, which reproduces the
// quantum correlations, and querying a draw with settings other than its
// own is a category error rather than a number.

#ifndef SUPERMEASURE_CHSH_HPP_
#define SUPERMEASURE_CHSH_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "supermeasure/measure.hpp"
#include "supermeasure/quantum.hpp"
#include "supermeasure/stats.hpp"
#include "supermeasure/types.hpp"

namespace supermeasure {

// Immutable once built. Weights are normalized per setting pair: for each
// (k,l), the four outcome-cell weights sum to 1 within 1e-12.
class SupermeasuredModel {
 public:
  SupermeasuredModel(ChshAngles angles, TwoQubitState state,
                     std::array<double, 16> weights);

  const ChshAngles& angles() const { return angles_; }
  const TwoQubitState& state() const { return state_; }

  // Indexed by SubspaceLabel::cell_index().
  const std::array<double, 16>& weights() const { return weights_; }
  double weight(const SubspaceLabel& label) const;

  // The four outcome-cell weights for one setting pair, ordered ++, +-,
  // -+, --. They form a probability vector.
  std::array<double, 4> cell_weights(const SettingPair& settings) const;

 private:
  ChshAngles angles_;
  TwoQubitState state_;
  std::array<double, 16> weights_;
};

// Fills the sixteen cell weights with the oracle outcome probabilities for
// the four setting pairs. Deterministic in its inputs.
SupermeasuredModel build_model(const ChshAngles& angles,
                               const TwoQubitState& state);

// One realized hidden value: position u inside the cell named by label.
struct HiddenVariableDraw {
  double u = 0.0;
  SubspaceLabel label;
};

enum class Side { A, B };

// The outcome stored in the draw's label for the queried side. Asking
// about a setting the draw does not carry has no answer in the model, so
// it throws CounterfactualError instead of inventing one.
int outcome(const HiddenVariableDraw& draw, Side side, int setting_index);

// Draws conditioned on one setting pair, as produced by a run of the
// experiment on that sub-ensemble of particle pairs.
class Ensemble {
 public:
  Ensemble(std::vector<HiddenVariableDraw> draws, SettingPair settings,
           std::uint64_t seed);

  const std::vector<HiddenVariableDraw>& draws() const { return draws_; }
  std::size_t size() const { return draws_.size(); }
  const SettingPair& settings() const { return settings_; }
  std::uint64_t seed() const { return seed_; }

  // CSV with header "u,outcome_a,outcome_b,k,l".
  void to_csv(std::ostream& out) const;

 private:
  std::vector<HiddenVariableDraw> draws_;
  SettingPair settings_;
  std::uint64_t seed_;
};

// n independent draws for the given setting pair: the outcome cell by
// inverse CDF over the pair's four weights, u uniform. Draw i depends only
// on (seed, i), so chunked and serial execution agree exactly.
Ensemble sample_ensemble(const SupermeasuredModel& model,
                         const SettingPair& settings, std::size_t n,
                         std::uint64_t seed);

// Mean of outcome_a * outcome_b over the ensemble, accumulated in exact
// integer arithmetic before the final division.
double estimate_expectation(const Ensemble& ensemble);

// S = -E(0,0) + E(1,0) + E(0,1) + E(1,1) from the four per-pair estimates.
// The ensembles may arrive in any order but must cover all four setting
// pairs exactly once; this sign placement is the CHSH combination whose
// quantum maximum sits at the canonical angle quadruple
// (0, pi/2, 3pi/4, pi/4).
double chsh_statistic(const Ensemble& e00, const Ensemble& e01,
                      const Ensemble& e10, const Ensemble& e11);

// Pairwise two-sample KS tests on the u values across the four ensembles
// (6 pairs), Bonferroni-corrected. statistic is the worst KS distance,
// p_value the adjusted minimum. Fail-to-reject means the u-marginals are
// statistically indistinguishable across setting choices.
TestReport physical_si_test(const Ensemble& e00, const Ensemble& e01,
                            const Ensemble& e10, const Ensemble& e11,
                            double alpha = 0.01);

// Maximum pairwise total-variation distance between the four-cell
// conditional weight vectors of different setting pairs. Strictly positive
// whenever conditioning on the settings changes the measure-weighted
// density, even though the bare u-distribution never changes.
double bell_si_violation(const SupermeasuredModel& model);

// Same comparison with each conditional expressed over all sixteen cells.
// Cells of different setting pairs are disjoint, so this is exactly 1:
// no hidden value is physical for two different setting choices.
double support_indicator_tv(const SupermeasuredModel& model);

// The model's measure-weighted density: constant density 1 on a
// subspace-weighted measure whose cell masses are the model weights.
// Conditioning this density on a setting pair recovers the weight vector.
BellDensity model_bell_density(const SupermeasuredModel& model,
                               std::size_t grid_cells = kDefaultGridCells);

// The model flattened onto the unit square: hidden value u' in [0,1) with
// the outcome cell encoded as the quarter-interval containing u'. The
// per-setting densities are piecewise constant at level 4 * weight, which
// gives the sampling construction a correlated input whose conditional
// hidden-variable distributions differ across setting pairs.
Distribution model_lambda_distribution(
    const SupermeasuredModel& model,
    std::size_t grid_cells = kDefaultGridCells);

}  // namespace supermeasure

#endif  // SUPERMEASURE_CHSH_HPP_
