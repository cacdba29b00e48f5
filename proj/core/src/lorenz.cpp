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

#include "supermeasure/lorenz.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>

#include "format_util.hpp"
#include "supermeasure/errors.hpp"
#include "supermeasure/rng.hpp"
#include "supermeasure/summation.hpp"

namespace supermeasure {
namespace {

Vec3 derivative(const LorenzParams& p, Vec3 s) {
  return Vec3{p.sigma * (s.y - s.x), s.x * (p.r - s.z) - s.y,
              s.x * s.y - p.beta * s.z};
}

bool finite(Vec3 v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

int clamp_index(double value, double lo, double hi, int cells) {
  const double scaled = (value - lo) / (hi - lo) * static_cast<double>(cells);
  int index = static_cast<int>(std::floor(scaled));
  return std::clamp(index, 0, cells - 1);
}

}  // namespace

void LorenzParams::validate() const {
  if (!std::isfinite(sigma) || !std::isfinite(r) || !std::isfinite(beta)) {
    throw DomainError("LorenzParams: parameters must be finite");
  }
  if (!(beta > 0.0)) throw DomainError("LorenzParams: beta must be positive");
}

double norm(Vec3 v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

Trajectory::Trajectory(std::vector<Vec3> samples, double dt)
    : samples_(std::move(samples)), dt_(dt) {
  if (samples_.empty()) {
    throw DomainError("Trajectory: at least one sample required");
  }
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
    throw DomainError("Trajectory: dt must be positive and finite");
  }
}

void Trajectory::to_csv(std::ostream& out) const {
  out << "t,x,y,z\n";
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const Vec3& s = samples_[i];
    out << detail::double_to_string(static_cast<double>(i) * dt_) << ','
        << detail::double_to_string(s.x) << ',' << detail::double_to_string(s.y)
        << ',' << detail::double_to_string(s.z) << '\n';
  }
}

Trajectory integrate(const LorenzParams& params, Vec3 initial, double dt,
                     std::size_t steps) {
  params.validate();
  if (!(dt > 0.0) || dt > 0.05) {
    throw DomainError("integrate: dt must lie in (0, 0.05]");
  }
  if (steps == 0) throw DomainError("integrate: steps must be >= 1");
  if (!finite(initial)) throw DomainError("integrate: initial state not finite");

  std::vector<Vec3> samples;
  samples.reserve(steps + 1);
  samples.push_back(initial);
  Vec3 s = initial;
  for (std::size_t i = 0; i < steps; ++i) {
    const Vec3 k1 = derivative(params, s);
    const Vec3 k2 = derivative(params, s + (dt / 2.0) * k1);
    const Vec3 k3 = derivative(params, s + (dt / 2.0) * k2);
    const Vec3 k4 = derivative(params, s + dt * k3);
    s = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!finite(s)) {
      throw DivergenceError("integrate: state became non-finite at step " +
                            std::to_string(i + 1));
    }
    samples.push_back(s);
  }
  return Trajectory(std::move(samples), dt);
}

void OccupancyGrid::validate() const {
  if (!(lo.x < hi.x && lo.y < hi.y && lo.z < hi.z)) {
    throw DomainError("OccupancyGrid: box must have positive extent");
  }
  if (cells_per_axis < 1) {
    throw DomainError("OccupancyGrid: cells_per_axis must be >= 1");
  }
}

std::size_t OccupancyGrid::cell_count() const {
  const std::size_t n = static_cast<std::size_t>(cells_per_axis);
  return n * n * n;
}

std::size_t OccupancyGrid::cell_of(Vec3 state) const {
  const int ix = clamp_index(state.x, lo.x, hi.x, cells_per_axis);
  const int iy = clamp_index(state.y, lo.y, hi.y, cells_per_axis);
  const int iz = clamp_index(state.z, lo.z, hi.z, cells_per_axis);
  const std::size_t n = static_cast<std::size_t>(cells_per_axis);
  return (static_cast<std::size_t>(ix) * n + static_cast<std::size_t>(iy)) *
             n +
         static_cast<std::size_t>(iz);
}

OccupancyMeasure::OccupancyMeasure(OccupancyGrid grid, std::vector<double> mass)
    : grid_(grid), mass_(std::move(mass)) {
  grid_.validate();
  if (mass_.size() != grid_.cell_count()) {
    throw DomainError("OccupancyMeasure: mass vector does not match grid");
  }
  CompensatedSum total;
  for (double m : mass_) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw DomainError("OccupancyMeasure: cell mass must be non-negative");
    }
    total.add(m);
  }
  if (std::abs(total.value() - 1.0) > 1e-12) {
    throw NormalizationError("OccupancyMeasure: masses must sum to 1");
  }
}

void OccupancyMeasure::to_csv(std::ostream& out) const {
  out << "ix,iy,iz,mass\n";
  const std::size_t n = static_cast<std::size_t>(grid_.cells_per_axis);
  for (std::size_t c = 0; c < mass_.size(); ++c) {
    if (mass_[c] == 0.0) continue;
    const std::size_t iz = c % n;
    const std::size_t iy = (c / n) % n;
    const std::size_t ix = c / (n * n);
    out << ix << ',' << iy << ',' << iz << ','
        << detail::double_to_string(mass_[c]) << '\n';
  }
}

OccupancyMeasure occupancy_measure(const Trajectory& trajectory,
                                   const OccupancyGrid& grid,
                                   std::size_t transient_steps) {
  grid.validate();
  if (transient_steps >= trajectory.size()) {
    throw InsufficientDataError(
        "occupancy_measure: no samples left after the transient");
  }
  const std::size_t kept = trajectory.size() - transient_steps;
  std::vector<double> mass(grid.cell_count(), 0.0);
  const double unit = 1.0 / static_cast<double>(kept);
  for (std::size_t i = transient_steps; i < trajectory.size(); ++i) {
    mass[grid.cell_of(trajectory.samples()[i])] += unit;
  }
  return OccupancyMeasure(grid, std::move(mass));
}

std::size_t default_transient(std::size_t samples) { return samples / 10; }

double occupancy_tv(const OccupancyMeasure& a, const OccupancyMeasure& b) {
  const OccupancyGrid& ga = a.grid();
  const OccupancyGrid& gb = b.grid();
  const bool same_grid =
      ga.cells_per_axis == gb.cells_per_axis && ga.lo.x == gb.lo.x &&
      ga.lo.y == gb.lo.y && ga.lo.z == gb.lo.z && ga.hi.x == gb.hi.x &&
      ga.hi.y == gb.hi.y && ga.hi.z == gb.hi.z;
  if (!same_grid) {
    throw DomainError("occupancy_tv: histograms use different grids");
  }
  CompensatedSum acc;
  for (std::size_t c = 0; c < a.mass().size(); ++c) {
    acc.add(std::abs(a.mass()[c] - b.mass()[c]));
  }
  return 0.5 * acc.value();
}

OffAttractorWitness off_attractor_witness(const LorenzParams& params,
                                          double dt, std::size_t steps,
                                          double perturbation,
                                          std::uint64_t seed,
                                          const OccupancyGrid& grid) {
  if (!std::isfinite(perturbation) || perturbation < 0.0) {
    throw DomainError(
        "off_attractor_witness: perturbation must be non-negative");
  }
  const CounterRng rng(derive_seed(seed, "off-attractor", 0));
  const Vec3 start{rng.uniform_at(0) * 40.0 - 20.0,
                   rng.uniform_at(1) * 40.0 - 20.0,
                   rng.uniform_at(2) * 40.0 - 20.0};
  // Random direction from a seeded point on the unit sphere (rejection-free
  // normalization of a cube sample is biased toward corners, but direction
  // uniformity is irrelevant here; any fixed deterministic direction works).
  Vec3 dir{rng.uniform_at(3) * 2.0 - 1.0, rng.uniform_at(4) * 2.0 - 1.0,
           rng.uniform_at(5) * 2.0 - 1.0};
  const double n = norm(dir);
  dir = n > 0.0 ? (1.0 / n) * dir : Vec3{1.0, 0.0, 0.0};
  const Vec3 other = start + perturbation * dir;

  const Trajectory ta = integrate(params, start, dt, steps);
  const Trajectory tb = integrate(params, other, dt, steps);
  const std::size_t transient = default_transient(ta.size());
  const OccupancyMeasure ha = occupancy_measure(ta, grid, transient);
  const OccupancyMeasure hb = occupancy_measure(tb, grid, transient);

  OffAttractorWitness witness;
  witness.initial_a = start;
  witness.initial_b = other;
  witness.tv = occupancy_tv(ha, hb);
  witness.steps = steps;
  return witness;
}

}  // namespace supermeasure
