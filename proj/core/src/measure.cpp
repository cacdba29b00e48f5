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

#include "supermeasure/measure.hpp"

#include <algorithm>
#include <cmath>

#include "supermeasure/errors.hpp"
#include "supermeasure/summation.hpp"

namespace supermeasure {

struct Measure::Data {
  MeasureKind kind = MeasureKind::uniform;
  std::vector<SettingPair> sectors;
  std::size_t grid_cells = kDefaultGridCells;
  std::vector<WeightedPoint> atoms;
  std::array<double, 16> cell_weights{};
  double total_mass = 0.0;
};

namespace {

double checked_weight(double w, const char* what) {
  if (!(w >= 0.0) || !std::isfinite(w)) {
    throw DomainError(std::string(what) + " must be finite and non-negative");
  }
  return w;
}

double midpoint(std::size_t cell, std::size_t cells) {
  return (static_cast<double>(cell) + 0.5) / static_cast<double>(cells);
}

double checked_density_value(double v) {
  if (!std::isfinite(v)) {
    throw NormalizationError("density evaluated to a non-finite value");
  }
  if (v < 0.0) {
    throw DomainError("density must be non-negative on the space");
  }
  return v;
}

// Integral of f against mu. For continuous sectors this is the midpoint
// rule on the measure's grid.
double integrate(const Measure& mu, const DensityFn& f) {
  CompensatedSum total;
  switch (mu.kind()) {
    case MeasureKind::uniform: {
      const std::size_t cells = mu.grid_cells();
      const double sector_mass =
          1.0 / static_cast<double>(mu.sectors().size());
      for (const SettingPair& s : mu.sectors()) {
        CompensatedSum sector;
        for (std::size_t g = 0; g < cells; ++g) {
          sector.add(checked_density_value(
              f(StateSpacePoint{midpoint(g, cells), s})));
        }
        total.add(sector_mass * sector.value() /
                  static_cast<double>(cells));
      }
      break;
    }
    case MeasureKind::atomic: {
      for (const WeightedPoint& a : mu.atoms()) {
        total.add(a.weight * checked_density_value(f(a.point)));
      }
      break;
    }
    case MeasureKind::subspace_weighted: {
      const std::size_t cells = mu.grid_cells();
      for (const SubspaceLabel& label : all_subspace_labels()) {
        const double w = mu.cell_weights()[static_cast<std::size_t>(
            cell_index(label))];
        if (w == 0.0) continue;
        CompensatedSum cell;
        for (std::size_t g = 0; g < cells; ++g) {
          cell.add(checked_density_value(
              f(StateSpacePoint{midpoint(g, cells), label.settings})));
        }
        total.add(0.25 * w * cell.value() / static_cast<double>(cells));
      }
      break;
    }
  }
  return total.value();
}

}  // namespace

Measure Measure::uniform(std::vector<SettingPair> sectors,
                         std::size_t grid_cells) {
  if (sectors.empty()) {
    throw DomainError("uniform measure needs at least one setting sector");
  }
  if (grid_cells == 0) {
    throw DomainError("grid must have at least one cell");
  }
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    validate(sectors[i]);
    for (std::size_t j = i + 1; j < sectors.size(); ++j) {
      if (sectors[i] == sectors[j]) {
        throw DomainError("uniform measure sectors must be distinct");
      }
    }
  }
  auto data = std::make_shared<Data>();
  data->kind = MeasureKind::uniform;
  data->sectors = std::move(sectors);
  data->grid_cells = grid_cells;
  data->total_mass = 1.0;
  return Measure(std::move(data));
}

Measure Measure::atomic(std::vector<WeightedPoint> atoms) {
  if (atoms.empty()) {
    throw DomainError("atomic measure needs at least one atom");
  }
  CompensatedSum mass;
  for (const WeightedPoint& a : atoms) {
    validate(a.point);
    mass.add(checked_weight(a.weight, "atom weight"));
  }
  if (!(mass.value() > 0.0) || !std::isfinite(mass.value())) {
    throw DomainError("atomic measure must have positive finite total mass");
  }
  auto data = std::make_shared<Data>();
  data->kind = MeasureKind::atomic;
  data->atoms = std::move(atoms);
  data->total_mass = mass.value();
  return Measure(std::move(data));
}

Measure Measure::subspace_weighted(const std::array<double, 16>& cell_weights,
                                   std::size_t grid_cells) {
  if (grid_cells == 0) {
    throw DomainError("grid must have at least one cell");
  }
  CompensatedSum mass;
  for (double w : cell_weights) {
    mass.add(0.25 * checked_weight(w, "cell weight"));
  }
  if (!(mass.value() > 0.0) || !std::isfinite(mass.value())) {
    throw DomainError(
        "subspace-weighted measure must have positive finite total mass");
  }
  auto data = std::make_shared<Data>();
  data->kind = MeasureKind::subspace_weighted;
  data->cell_weights = cell_weights;
  data->grid_cells = grid_cells;
  data->total_mass = mass.value();
  return Measure(std::move(data));
}

MeasureKind Measure::kind() const { return data_->kind; }
double Measure::total_mass() const { return data_->total_mass; }
std::size_t Measure::grid_cells() const { return data_->grid_cells; }

const std::vector<SettingPair>& Measure::sectors() const {
  if (data_->kind != MeasureKind::uniform) {
    throw DomainError("sectors are defined for uniform measures only");
  }
  return data_->sectors;
}

const std::vector<WeightedPoint>& Measure::atoms() const {
  if (data_->kind != MeasureKind::atomic) {
    throw DomainError("atoms are defined for atomic measures only");
  }
  return data_->atoms;
}

const std::array<double, 16>& Measure::cell_weights() const {
  if (data_->kind != MeasureKind::subspace_weighted) {
    throw DomainError(
        "cell weights are defined for subspace-weighted measures only");
  }
  return data_->cell_weights;
}

double Distribution::density(const StateSpacePoint& point) const {
  return checked_density_value(unnormalized_(point)) / normalizer_;
}

Distribution normalize(const DensityFn& density, const Measure& mu) {
  if (!density) {
    throw DomainError("density callable must be non-empty");
  }
  const double z = integrate(mu, density);
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw NormalizationError(
        "density has zero or non-finite total mass against the measure");
  }
  return Distribution(density, z, mu);
}

BellDensity bell_density(const Distribution& rho, const Measure& mu) {
  if (!rho.base_measure().same_space(mu)) {
    throw DomainError(
        "distribution is paired with a different space than the measure");
  }
  const double total =
      integrate(mu, [&rho](const StateSpacePoint& p) {
        return rho.density(p);
      });
  if (std::abs(total - 1.0) > 1e-9) {
    throw NormalizationError(
        "distribution does not integrate to 1 against the measure");
  }
  return BellDensity(rho);
}

double probability(const BellDensity& bd, const SubsetPredicate& subset) {
  if (!subset) {
    throw DomainError("subset predicate must be non-empty");
  }
  const Measure& mu = bd.mu();
  if (mu.kind() == MeasureKind::subspace_weighted) {
    throw DomainError(
        "predicate subsets are not defined over subspace-weighted measures; "
        "query cells via conditional_cell_weights or setting_probability");
  }
  const double p = integrate(mu, [&](const StateSpacePoint& pt) {
    return subset(pt) ? bd.rho().density(pt) : 0.0;
  });
  return std::clamp(p, 0.0, 1.0);
}

LambdaDistribution LambdaDistribution::from_grid(
    std::vector<double> cell_densities) {
  if (cell_densities.empty()) {
    throw DomainError("grid distribution needs at least one cell");
  }
  CompensatedSum mass;
  for (double v : cell_densities) {
    mass.add(checked_weight(v, "cell density") /
             static_cast<double>(cell_densities.size()));
  }
  if (!(mass.value() > 0.0) || !std::isfinite(mass.value())) {
    throw NormalizationError("grid distribution must have positive mass");
  }
  LambdaDistribution d;
  d.kind_ = Kind::grid;
  d.grid_ = std::move(cell_densities);
  for (double& v : d.grid_) v /= mass.value();
  return d;
}

LambdaDistribution LambdaDistribution::from_atoms(
    std::vector<std::pair<double, double>> atoms) {
  if (atoms.empty()) {
    throw DomainError("atomic distribution needs at least one atom");
  }
  CompensatedSum mass;
  for (const auto& [lambda, w] : atoms) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
      throw DomainError("hidden variable must lie in [0, 1]");
    }
    mass.add(checked_weight(w, "atom weight"));
  }
  if (!(mass.value() > 0.0) || !std::isfinite(mass.value())) {
    throw NormalizationError("atomic distribution must have positive mass");
  }
  std::sort(atoms.begin(), atoms.end());
  LambdaDistribution d;
  d.kind_ = Kind::atomic;
  d.atoms_ = std::move(atoms);
  for (auto& [lambda, w] : d.atoms_) w /= mass.value();
  return d;
}

double LambdaDistribution::probability(
    const std::function<bool(double)>& subset) const {
  if (!subset) {
    throw DomainError("subset predicate must be non-empty");
  }
  CompensatedSum p;
  if (kind_ == Kind::grid) {
    const std::size_t cells = grid_.size();
    for (std::size_t g = 0; g < cells; ++g) {
      if (subset(midpoint(g, cells))) {
        p.add(grid_[g] / static_cast<double>(cells));
      }
    }
  } else {
    for (const auto& [lambda, w] : atoms_) {
      if (subset(lambda)) p.add(w);
    }
  }
  return std::clamp(p.value(), 0.0, 1.0);
}

double LambdaDistribution::mean() const {
  CompensatedSum m;
  if (kind_ == Kind::grid) {
    const std::size_t cells = grid_.size();
    for (std::size_t g = 0; g < cells; ++g) {
      m.add(midpoint(g, cells) * grid_[g] / static_cast<double>(cells));
    }
  } else {
    for (const auto& [lambda, w] : atoms_) m.add(lambda * w);
  }
  return m.value();
}

double total_variation(const LambdaDistribution& a,
                       const LambdaDistribution& b) {
  if (a.kind() != b.kind()) {
    throw DomainError(
        "total variation needs hidden-variable distributions of one kind");
  }
  CompensatedSum dist;
  if (a.kind() == LambdaDistribution::Kind::grid) {
    const auto& ga = a.grid_values();
    const auto& gb = b.grid_values();
    if (ga.size() != gb.size()) {
      throw DomainError("grid distributions must share the grid size");
    }
    for (std::size_t g = 0; g < ga.size(); ++g) {
      dist.add(std::abs(ga[g] - gb[g]) / static_cast<double>(ga.size()));
    }
  } else {
    const auto& aa = a.atoms();
    const auto& ab = b.atoms();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < aa.size() || j < ab.size()) {
      if (j == ab.size() ||
          (i < aa.size() && aa[i].first < ab[j].first)) {
        dist.add(aa[i++].second);
      } else if (i == aa.size() || ab[j].first < aa[i].first) {
        dist.add(ab[j++].second);
      } else {
        dist.add(std::abs(aa[i].second - ab[j].second));
        ++i;
        ++j;
      }
    }
  }
  return 0.5 * dist.value();
}

namespace {

// Shared worker: hidden-variable densities on the grid for one sector of a
// continuous-kind measure, weighted by the sector's mass under rho * mu.
std::vector<double> sector_grid(const BellDensity& bd, SettingPair settings,
                                double* sector_probability) {
  const Measure& mu = bd.mu();
  const std::size_t cells = mu.grid_cells();
  std::vector<double> values(cells, 0.0);
  double sector_mass = 0.0;
  if (mu.kind() == MeasureKind::uniform) {
    bool found = false;
    for (const SettingPair& s : mu.sectors()) {
      if (s == settings) found = true;
    }
    if (found) {
      sector_mass = 1.0 / static_cast<double>(mu.sectors().size());
    }
  } else {
    for (int oi = 0; oi < 4; ++oi) {
      sector_mass +=
          0.25 * mu.cell_weights()[static_cast<std::size_t>(
                     4 * oi + setting_index(settings))];
    }
  }
  CompensatedSum integral;
  if (sector_mass > 0.0) {
    for (std::size_t g = 0; g < cells; ++g) {
      const double v =
          sector_mass *
          bd.rho().density(StateSpacePoint{midpoint(g, cells), settings});
      values[g] = v;
      integral.add(v / static_cast<double>(cells));
    }
  }
  *sector_probability = integral.value();
  return values;
}

}  // namespace

double setting_probability(const BellDensity& bd, SettingPair settings) {
  validate(settings);
  const Measure& mu = bd.mu();
  if (mu.kind() == MeasureKind::atomic) {
    CompensatedSum p;
    for (const WeightedPoint& a : mu.atoms()) {
      if (a.point.settings == settings) {
        p.add(a.weight * bd.rho().density(a.point));
      }
    }
    return std::clamp(p.value(), 0.0, 1.0);
  }
  double p = 0.0;
  sector_grid(bd, settings, &p);
  return std::clamp(p, 0.0, 1.0);
}

LambdaDistribution conditional(const BellDensity& bd, SettingPair settings) {
  validate(settings);
  const Measure& mu = bd.mu();
  if (mu.kind() == MeasureKind::atomic) {
    std::vector<std::pair<double, double>> atoms;
    for (const WeightedPoint& a : mu.atoms()) {
      if (a.point.settings == settings) {
        const double w = a.weight * bd.rho().density(a.point);
        if (w > 0.0) atoms.emplace_back(a.point.lambda, w);
      }
    }
    if (atoms.empty()) {
      throw ConditioningError(
          "conditioning on a setting pair of probability zero");
    }
    return LambdaDistribution::from_atoms(std::move(atoms));
  }
  double p = 0.0;
  std::vector<double> values = sector_grid(bd, settings, &p);
  if (!(p > 0.0)) {
    throw ConditioningError(
        "conditioning on a setting pair of probability zero");
  }
  return LambdaDistribution::from_grid(std::move(values));
}

LambdaDistribution lambda_marginal(const BellDensity& bd) {
  const Measure& mu = bd.mu();
  if (mu.kind() == MeasureKind::atomic) {
    std::vector<std::pair<double, double>> atoms;
    for (const WeightedPoint& a : mu.atoms()) {
      const double w = a.weight * bd.rho().density(a.point);
      if (w > 0.0) atoms.emplace_back(a.point.lambda, w);
    }
    return LambdaDistribution::from_atoms(std::move(atoms));
  }
  const std::size_t cells = mu.grid_cells();
  std::vector<double> values(cells, 0.0);
  const auto sectors = mu.kind() == MeasureKind::uniform
                           ? mu.sectors()
                           : std::vector<SettingPair>(kAllSettingPairs.begin(),
                                                      kAllSettingPairs.end());
  for (const SettingPair& s : sectors) {
    double p = 0.0;
    const std::vector<double> sector = sector_grid(bd, s, &p);
    for (std::size_t g = 0; g < cells; ++g) values[g] += sector[g];
  }
  return LambdaDistribution::from_grid(std::move(values));
}

std::array<double, 4> conditional_cell_weights(const BellDensity& bd,
                                               SettingPair settings) {
  validate(settings);
  const Measure& mu = bd.mu();
  if (mu.kind() != MeasureKind::subspace_weighted) {
    throw DomainError(
        "cell weights are defined over subspace-weighted measures only");
  }
  const std::size_t cells = mu.grid_cells();
  CompensatedSum u_integral;
  for (std::size_t g = 0; g < cells; ++g) {
    u_integral.add(
        bd.rho().density(StateSpacePoint{midpoint(g, cells), settings}) /
        static_cast<double>(cells));
  }
  std::array<double, 4> weights{};
  CompensatedSum total;
  for (int oi = 0; oi < 4; ++oi) {
    const double w = mu.cell_weights()[static_cast<std::size_t>(
                         4 * oi + setting_index(settings))] *
                     u_integral.value();
    weights[static_cast<std::size_t>(oi)] = w;
    total.add(w);
  }
  if (!(total.value() > 0.0)) {
    throw ConditioningError(
        "conditioning on a setting pair of probability zero");
  }
  for (double& w : weights) w /= total.value();
  return weights;
}

}  // namespace supermeasure
