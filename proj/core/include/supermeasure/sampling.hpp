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

#ifndef SUPERMEASURE_SAMPLING_HPP_
#define SUPERMEASURE_SAMPLING_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "supermeasure/measure.hpp"
#include "supermeasure/stats.hpp"
#include "supermeasure/types.hpp"

namespace supermeasure {

// Finite point set standing in for a continuous state space: every atom
// carries weight exactly 1/N, and all distributional structure lives in
// where the atoms sit. Deterministic in (distribution, n, seed).
class SampledSpace {
 public:
  SampledSpace(std::vector<StateSpacePoint> atoms, std::uint64_t seed);

  const std::vector<StateSpacePoint>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double atom_weight() const { return 1.0 / static_cast<double>(size()); }
  std::uint64_t seed() const { return seed_; }

  // CSV with header "lambda,setting_k,setting_l".
  void to_csv(std::ostream& out) const;

 private:
  std::vector<StateSpacePoint> atoms_;
  std::uint64_t seed_;
};

// Draws n points from rho by sector choice (inverse CDF over setting
// sectors) composed with inverse-CDF sampling of the in-sector
// hidden-variable density on the measure's grid. Requires a uniform-kind
// base measure. Draw i depends only on (seed, i), so results are chunk
// order independent.
SampledSpace sample_space(const Distribution& rho, std::size_t n,
                          std::uint64_t seed);

// Rejection-sampling fallback for densities only known pointwise with a
// bound: density(point) <= bound everywhere. Same distribution as
// sample_space, different draw path.
SampledSpace sample_space_rejection(const Distribution& rho, std::size_t n,
                                    std::uint64_t seed, double density_bound);

// Fraction of atoms inside the subset.
double empirical_probability(const SampledSpace& space,
                             const SubsetPredicate& subset);

// Two verdicts over a sampled space. The sampled distribution (uniform atom
// weights) is setting independent by construction, so the first report is
// definitional; the product distribution is audited by pairwise two-sample
// KS tests on the per-setting hidden-variable values with a Bonferroni
// correction.
struct SiAudit {
  TestReport physical_si;
  TestReport bell_si;
};

SiAudit si_audit(const SampledSpace& space, double alpha = 0.01);

}  // namespace supermeasure

#endif  // SUPERMEASURE_SAMPLING_HPP_
