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

#ifndef SUPERMEASURE_QUANTUM_HPP_
#define SUPERMEASURE_QUANTUM_HPP_

#include <array>
#include <complex>

#include "supermeasure/types.hpp"

namespace supermeasure {

// Pure state of two spin-1/2 systems, amplitudes in the product basis
// |00>, |01>, |10>, |11>. Must be normalized to 1 within 1e-12.
struct TwoQubitState {
  std::array<std::complex<double>, 4> amplitudes{};

  // (|01> - |10>) / sqrt(2)
  static TwoQubitState singlet();

  // Product of two single-qubit states (each normalized internally).
  static TwoQubitState product(const std::array<std::complex<double>, 2>& a,
                               const std::array<std::complex<double>, 2>& b);
};

void validate(const TwoQubitState& state);

// Joint outcome probabilities for spin measurements along two angles in a
// common plane. Field order matches the cell order (++, +-, -+, --).
struct OutcomeProbabilities {
  double pp = 0.0;
  double pm = 0.0;
  double mp = 0.0;
  double mm = 0.0;

  std::array<double, 4> as_array() const { return {pp, pm, mp, mm}; }
  double at(int outcome_a, int outcome_b) const;
};

// Born probabilities by projection onto the product of planar spin
// eigenvectors (cos(t/2), sin(t/2)) and (-sin(t/2), cos(t/2)).
OutcomeProbabilities outcome_probabilities(const TwoQubitState& state,
                                           MeasurementAngle theta_a,
                                           MeasurementAngle theta_b);

// E(theta_a, theta_b) = sum_{ab} a * b * P(a, b). For the singlet this is
// -cos(theta_a - theta_b).
double correlation(const TwoQubitState& state, MeasurementAngle theta_a,
                   MeasurementAngle theta_b);

struct ChshAngles {
  MeasurementAngle x0;
  MeasurementAngle x1;
  MeasurementAngle y0;
  MeasurementAngle y1;

  MeasurementAngle alice(int k) const { return k == 0 ? x0 : x1; }
  MeasurementAngle bob(int l) const { return l == 0 ? y0 : y1; }
};

// Canonical quadruple at which the singlet attains |S| = 2 sqrt(2):
// x0 = 0, x1 = pi/2, y0 = 3 pi/4, y1 = pi/4.
ChshAngles optimal_chsh_angles();

// CHSH combination S = -E(x0,y0) + E(x1,y0) + E(x0,y1) + E(x1,y1), the
// representative whose maximum sits at optimal_chsh_angles(). Local
// deterministic models obey |S| <= 2; quantum states reach 2 sqrt(2).
double chsh_value(const TwoQubitState& state, const ChshAngles& angles);

}  // namespace supermeasure

#endif  // SUPERMEASURE_QUANTUM_HPP_
