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

#ifndef SUPERMEASURE_MEASURE_HPP_
#define SUPERMEASURE_MEASURE_HPP_

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "supermeasure/types.hpp"

namespace supermeasure {

// Cells per continuous dimension when a density is integrated numerically
// (midpoint rule on an even grid over [0, 1]).
inline constexpr std::size_t kDefaultGridCells = 4096;

enum class MeasureKind { uniform, atomic, subspace_weighted };

struct WeightedPoint {
  StateSpacePoint point;
  double weight = 0.0;
};

// Base measure over the state space (hidden variable in [0, 1] times a
// finite set of setting pairs). Three kinds:
//   uniform            Lebesgue on [0, 1] per sector, equal sector masses,
//                      total mass 1
//   atomic             finite weighted point set (the sampled-space case)
//   subspace_weighted  sixteen outcome-and-setting cells, each uniform in
//                      the hidden variable, cell mass proportional to its
//                      weight (setting pairs carry equal prior mass)
// Copies share the underlying space identity; operations that combine a
// distribution with a measure require the identical space.
class Measure {
 public:
  static Measure uniform(std::vector<SettingPair> sectors,
                         std::size_t grid_cells = kDefaultGridCells);
  static Measure atomic(std::vector<WeightedPoint> atoms);
  static Measure subspace_weighted(const std::array<double, 16>& cell_weights,
                                   std::size_t grid_cells = kDefaultGridCells);

  MeasureKind kind() const;
  double total_mass() const;
  std::size_t grid_cells() const;
  const std::vector<SettingPair>& sectors() const;
  const std::vector<WeightedPoint>& atoms() const;
  // Indexed by cell_index(); only for subspace_weighted measures.
  const std::array<double, 16>& cell_weights() const;

  bool same_space(const Measure& other) const { return data_ == other.data_; }

 private:
  struct Data;
  explicit Measure(std::shared_ptr<const Data> data)
      : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

using DensityFn = std::function<double(const StateSpacePoint&)>;
using SubsetPredicate = std::function<bool(const StateSpacePoint&)>;

// Probability density paired with its base measure; density() returns the
// normalized value, so the density integrates to 1 against base_measure().
class Distribution {
 public:
  double density(const StateSpacePoint& point) const;
  // The raw integral of the unnormalized input density.
  double normalizer() const { return normalizer_; }
  const Measure& base_measure() const { return measure_; }

 private:
  friend Distribution normalize(const DensityFn&, const Measure&);
  Distribution(DensityFn f, double z, Measure mu)
      : unnormalized_(std::move(f)), normalizer_(z), measure_(std::move(mu)) {}

  DensityFn unnormalized_;
  double normalizer_;
  Measure measure_;
};

// Divides a non-negative density by its integral against mu. Throws
// NormalizationError when the total mass is zero or non-finite.
Distribution normalize(const DensityFn& density, const Measure& mu);

// The product rho * mu treated as one object: the distribution actually
// compared in independence tests. Requires rho to be paired with exactly
// this measure and normalized against it within 1e-9.
class BellDensity {
 public:
  const Distribution& rho() const { return rho_; }
  const Measure& mu() const { return rho_.base_measure(); }

 private:
  friend BellDensity bell_density(const Distribution&, const Measure&);
  explicit BellDensity(Distribution rho) : rho_(std::move(rho)) {}

  Distribution rho_;
};

BellDensity bell_density(const Distribution& rho, const Measure& mu);

// P(A) = integral of rho over A against mu. Result clipped to [0, 1].
// Defined for uniform and atomic measures; subspace-weighted spaces are
// queried through their cells instead.
double probability(const BellDensity& bd, const SubsetPredicate& subset);

// Distribution of the hidden variable alone, either as densities at the
// midpoints of an even grid on [0, 1] (with respect to Lebesgue measure) or
// as a finite atom list. Always normalized.
class LambdaDistribution {
 public:
  enum class Kind { grid, atomic };

  static LambdaDistribution from_grid(std::vector<double> cell_densities);
  static LambdaDistribution from_atoms(
      std::vector<std::pair<double, double>> atoms);

  Kind kind() const { return kind_; }
  const std::vector<double>& grid_values() const { return grid_; }
  const std::vector<std::pair<double, double>>& atoms() const {
    return atoms_;
  }

  double probability(const std::function<bool(double)>& subset) const;
  double mean() const;

 private:
  LambdaDistribution() = default;

  Kind kind_ = Kind::grid;
  std::vector<double> grid_;
  std::vector<std::pair<double, double>> atoms_;  // (lambda, weight), sorted
};

// Total variation distance between two hidden-variable distributions of the
// same kind (and same grid size for grid distributions).
double total_variation(const LambdaDistribution& a,
                       const LambdaDistribution& b);

// Conditional distribution of the hidden variable given a setting pair.
// Throws ConditioningError when the pair has probability zero.
LambdaDistribution conditional(const BellDensity& bd, SettingPair settings);

// Marginal distribution of the hidden variable.
LambdaDistribution lambda_marginal(const BellDensity& bd);

// Probability of observing the given setting pair.
double setting_probability(const BellDensity& bd, SettingPair settings);

// For subspace-weighted spaces: conditional weights of the four outcome
// cells (order ++, +-, -+, --) given a setting pair. This is where the
// conditioned object differs across setting pairs even though the
// hidden-variable conditional does not.
std::array<double, 4> conditional_cell_weights(const BellDensity& bd,
                                               SettingPair settings);

}  // namespace supermeasure

#endif  // SUPERMEASURE_MEASURE_HPP_
