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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "format_util.hpp"
#include "supermeasure/errors.hpp"
#include "supermeasure/rng.hpp"
#include "supermeasure/summation.hpp"

namespace supermeasure {
namespace {

// Per-sector tables for two-stage inverse-CDF sampling: first pick the
// setting sector, then the hidden-variable cell, then place the point
// uniformly inside the cell. Exact for grid-piecewise-constant densities,
// which is the resolution every density is integrated at anyway.
struct SamplingTables {
  std::vector<SettingPair> sectors;
  std::vector<double> sector_cdf;              // normalized, last entry 1
  std::vector<std::vector<double>> cell_cdf;   // per sector, normalized
  std::size_t grid_cells = 0;
};

SamplingTables build_tables(const Distribution& rho) {
  const Measure& mu = rho.base_measure();
  if (mu.kind() != MeasureKind::uniform) {
    throw DomainError(
        "sample_space: distribution must sit on a uniform base measure");
  }
  SamplingTables tables;
  tables.sectors = mu.sectors();
  tables.grid_cells = mu.grid_cells();
  const double cell_width = 1.0 / static_cast<double>(tables.grid_cells);
  const double sector_mass = mu.total_mass() /
                             static_cast<double>(tables.sectors.size());

  std::vector<double> sector_prob;
  sector_prob.reserve(tables.sectors.size());
  for (const SettingPair& pair : tables.sectors) {
    CompensatedSum sector_sum;
    std::vector<double> cdf(tables.grid_cells, 0.0);
    CompensatedSum running;
    for (std::size_t j = 0; j < tables.grid_cells; ++j) {
      const double mid = (static_cast<double>(j) + 0.5) * cell_width;
      const double d = rho.density(StateSpacePoint{mid, pair});
      running.add(d);
      cdf[j] = running.value();
      sector_sum.add(d * cell_width * sector_mass);
    }
    const double total = cdf.back();
    if (total > 0.0) {
      for (double& c : cdf) c /= total;
      cdf.back() = 1.0;
    }
    tables.cell_cdf.push_back(std::move(cdf));
    sector_prob.push_back(std::max(0.0, sector_sum.value()));
  }

  CompensatedSum norm;
  for (double p : sector_prob) norm.add(p);
  const double z = norm.value();
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw NormalizationError("sample_space: density integrates to zero");
  }
  tables.sector_cdf.resize(sector_prob.size());
  CompensatedSum acc;
  for (std::size_t s = 0; s < sector_prob.size(); ++s) {
    acc.add(sector_prob[s] / z);
    tables.sector_cdf[s] = acc.value();
  }
  tables.sector_cdf.back() = 1.0;
  return tables;
}

std::size_t invert_cdf(const std::vector<double>& cdf, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<std::size_t>(it - cdf.begin());
}

StateSpacePoint draw_point(const SamplingTables& tables, const CounterRng& rng,
                           std::uint64_t index) {
  const double u_sector = rng.uniform_at(2 * index);
  const double u_cell = rng.uniform_at(2 * index + 1);
  const std::size_t s = invert_cdf(tables.sector_cdf, u_sector);
  const std::vector<double>& cdf = tables.cell_cdf[s];
  const std::size_t j = invert_cdf(cdf, u_cell);
  const double lo = j == 0 ? 0.0 : cdf[j - 1];
  const double hi = cdf[j];
  const double span = hi - lo;
  const double frac = span > 0.0 ? (u_cell - lo) / span : 0.5;
  double lambda = (static_cast<double>(j) + frac) /
                  static_cast<double>(tables.grid_cells);
  lambda = std::min(lambda, std::nextafter(1.0, 0.0));
  return StateSpacePoint{lambda, tables.sectors[s]};
}

}  // namespace

SampledSpace::SampledSpace(std::vector<StateSpacePoint> atoms,
                           std::uint64_t seed)
    : atoms_(std::move(atoms)), seed_(seed) {
  if (atoms_.empty()) {
    throw EmptySpaceError("SampledSpace: at least one atom required");
  }
  for (const StateSpacePoint& p : atoms_) validate(p);
}

void SampledSpace::to_csv(std::ostream& out) const {
  out << "lambda,setting_k,setting_l\n";
  for (const StateSpacePoint& p : atoms_) {
    out << detail::double_to_string(p.lambda) << ',' << p.settings.k << ','
        << p.settings.l << '\n';
  }
}

SampledSpace sample_space(const Distribution& rho, std::size_t n,
                          std::uint64_t seed) {
  if (n == 0) throw EmptySpaceError("sample_space: N must be at least 1");
  const SamplingTables tables = build_tables(rho);
  const CounterRng rng(derive_seed(seed, "sample-space", 0));

  std::vector<StateSpacePoint> atoms(n, StateSpacePoint{});
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(
          std::thread::hardware_concurrency(), n / 4096 + 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      atoms[i] = draw_point(tables, rng, i);
    }
  } else {
    // Atom i is a pure function of (seed, i), so each chunk writes its own
    // index range and the merge is free.
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(n, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] {
        for (std::size_t i = lo; i < hi; ++i) {
          atoms[i] = draw_point(tables, rng, i);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  return SampledSpace(std::move(atoms), seed);
}

SampledSpace sample_space_rejection(const Distribution& rho, std::size_t n,
                                    std::uint64_t seed, double density_bound) {
  if (n == 0) throw EmptySpaceError("sample_space: N must be at least 1");
  if (!(density_bound > 0.0) || !std::isfinite(density_bound)) {
    throw DomainError("sample_space_rejection: bound must be positive finite");
  }
  const Measure& mu = rho.base_measure();
  if (mu.kind() != MeasureKind::uniform) {
    throw DomainError(
        "sample_space_rejection: distribution must sit on a uniform measure");
  }
  const std::vector<SettingPair>& sectors = mu.sectors();
  const CounterRng rng(derive_seed(seed, "sample-space-rejection", 0));

  std::vector<StateSpacePoint> atoms;
  atoms.reserve(n);
  std::uint64_t attempt = 0;
  while (atoms.size() < n) {
    const std::uint64_t base = 3 * attempt++;
    const std::size_t s = static_cast<std::size_t>(
        rng.below_at(base, sectors.size()));
    const double lambda = rng.uniform_at(base + 1);
    const StateSpacePoint candidate{lambda, sectors[s]};
    const double d = rho.density(candidate);
    if (d > density_bound * (1.0 + 1e-12)) {
      throw DomainError(
          "sample_space_rejection: density exceeds the stated bound");
    }
    if (rng.uniform_at(base + 2) * density_bound < d) {
      atoms.push_back(candidate);
    }
  }
  return SampledSpace(std::move(atoms), seed);
}

double empirical_probability(const SampledSpace& space,
                             const SubsetPredicate& subset) {
  if (!subset) throw DomainError("empirical_probability: empty predicate");
  std::size_t hits = 0;
  for (const StateSpacePoint& p : space.atoms()) {
    if (subset(p)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(space.size());
}

SiAudit si_audit(const SampledSpace& space, double alpha) {
  std::array<std::vector<double>, 4> per_sector;
  for (const StateSpacePoint& p : space.atoms()) {
    per_sector[static_cast<std::size_t>(setting_index(p.settings))]
        .push_back(p.lambda);
  }
  std::vector<std::size_t> present;
  for (std::size_t s = 0; s < per_sector.size(); ++s) {
    if (!per_sector[s].empty()) present.push_back(s);
  }
  if (present.size() < 2) {
    throw InsufficientDataError(
        "si_audit: at least 2 distinct setting pairs required");
  }
  for (std::size_t s : present) {
    std::sort(per_sector[s].begin(), per_sector[s].end());
  }

  // The sampled distribution puts weight exactly 1/N on every atom, so
  // conditioning on a setting pair always yields the uniform distribution
  // over that sector's atoms. Nothing to estimate.
  SiAudit audit;
  audit.physical_si =
      make_report(0.0, 1.0, alpha, "uniform-by-construction");

  double worst_stat = 0.0;
  double min_p = 1.0;
  std::size_t comparisons = 0;
  for (std::size_t a = 0; a < present.size(); ++a) {
    for (std::size_t b = a + 1; b < present.size(); ++b) {
      const TestReport r = ks_two_sample_sorted(per_sector[present[a]],
                                                per_sector[present[b]]);
      worst_stat = std::max(worst_stat, r.statistic);
      min_p = std::min(min_p, r.p_value);
      ++comparisons;
    }
  }
  const double adjusted =
      std::min(1.0, min_p * static_cast<double>(comparisons));
  audit.bell_si =
      make_report(worst_stat, adjusted, alpha, "ks-pairwise-bonferroni");
  return audit;
}

}  // namespace supermeasure
