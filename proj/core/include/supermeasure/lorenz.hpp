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
// A concrete dynamical system whose long-run behavior defines a
// non-trivial invariant measure: trajectories started anywhere collapse
// onto the same attracting set, and the fraction of time spent in each
// region of state space stabilizes to a histogram that is independent of
// the starting point. Points off that set are transient, never revisited.

#ifndef SUPERMEASURE_LORENZ_HPP_
#define SUPERMEASURE_LORENZ_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace supermeasure {

struct LorenzParams {
  double sigma = 10.0;
  double r = 28.0;
  double beta = 8.0 / 3.0;

  void validate() const;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) {
    return Vec3{a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Vec3 operator*(double s, Vec3 v) {
    return Vec3{s * v.x, s * v.y, s * v.z};
  }
};

double norm(Vec3 v);

// Uniformly spaced states, samples[i] at time i * dt (initial state
// included as samples[0]).
class Trajectory {
 public:
  Trajectory(std::vector<Vec3> samples, double dt);

  const std::vector<Vec3>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double dt() const { return dt_; }

  // CSV with header "t,x,y,z".
  void to_csv(std::ostream& out) const;

 private:
  std::vector<Vec3> samples_;
  double dt_;
};

// Classical fourth-order fixed-step integration of
//   dx/dt = sigma (y - x),  dy/dt = x (r - z) - y,  dz/dt = x y - beta z.
// dt must lie in (0, 0.05]; a non-finite state aborts with
// DivergenceError.
Trajectory integrate(const LorenzParams& params, Vec3 initial, double dt,
                     std::size_t steps);

// Axis-aligned box partitioned into cells_per_axis^3 equal cells. States
// outside the box are clamped into the nearest boundary cell so every
// sample carries mass.
struct OccupancyGrid {
  Vec3 lo{-30.0, -40.0, -10.0};
  Vec3 hi{30.0, 40.0, 60.0};
  int cells_per_axis = 32;

  void validate() const;
  std::size_t cell_count() const;
  std::size_t cell_of(Vec3 state) const;
};

// Normalized cell frequencies of the post-transient trajectory segment.
class OccupancyMeasure {
 public:
  OccupancyMeasure(OccupancyGrid grid, std::vector<double> mass);

  const OccupancyGrid& grid() const { return grid_; }
  const std::vector<double>& mass() const { return mass_; }

  // CSV of the occupied cells only, header "ix,iy,iz,mass".
  void to_csv(std::ostream& out) const;

 private:
  OccupancyGrid grid_;
  std::vector<double> mass_;
};

// Histogram of the trajectory after discarding the first transient_steps
// samples. Masses sum to 1 within 1e-12.
OccupancyMeasure occupancy_measure(const Trajectory& trajectory,
                                   const OccupancyGrid& grid,
                                   std::size_t transient_steps);

// Default transient: the first 10% of samples.
std::size_t default_transient(std::size_t samples);

// Total-variation distance between two occupancy histograms on the same
// grid.
double occupancy_tv(const OccupancyMeasure& a, const OccupancyMeasure& b);

// Integrates two trajectories, one from a seeded random point in
// [-20,20]^3 and one displaced from it by `perturbation` along a seeded
// random direction, and compares their occupancy histograms. A small
// distance certifies that the long-run measure does not remember the
// initial point.
struct OffAttractorWitness {
  Vec3 initial_a;
  Vec3 initial_b;
  double tv = 0.0;
  std::size_t steps = 0;
};

OffAttractorWitness off_attractor_witness(const LorenzParams& params,
                                          double dt, std::size_t steps,
                                          double perturbation,
                                          std::uint64_t seed,
                                          const OccupancyGrid& grid = {});

}  // namespace supermeasure

#endif  // SUPERMEASURE_LORENZ_HPP_
