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

#include "supermeasure/quantum.hpp"

#include <cmath>

#include "supermeasure/errors.hpp"

namespace supermeasure {

namespace {

constexpr double kNormTolerance = 1e-12;

// Planar spin eigenvectors for outcome +1 / -1 along angle theta.
std::array<double, 2> eigenvector(double theta, int outcome) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  if (outcome == +1) return {c, s};
  return {-s, c};
}

}  // namespace

TwoQubitState TwoQubitState::singlet() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  TwoQubitState state;
  state.amplitudes = {std::complex<double>(0.0), inv_sqrt2, -inv_sqrt2,
                      std::complex<double>(0.0)};
  return state;
}

TwoQubitState TwoQubitState::product(
    const std::array<std::complex<double>, 2>& a,
    const std::array<std::complex<double>, 2>& b) {
  const double na = std::sqrt(std::norm(a[0]) + std::norm(a[1]));
  const double nb = std::sqrt(std::norm(b[0]) + std::norm(b[1]));
  if (na == 0.0 || nb == 0.0) {
    throw StateError("product factors must be nonzero");
  }
  TwoQubitState state;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      state.amplitudes[2 * i + j] = (a[i] / na) * (b[j] / nb);
    }
  }
  return state;
}

void validate(const TwoQubitState& state) {
  double norm2 = 0.0;
  for (const auto& amp : state.amplitudes) {
    if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag())) {
      throw StateError("state amplitudes must be finite");
    }
    norm2 += std::norm(amp);
  }
  if (std::abs(norm2 - 1.0) > kNormTolerance) {
    throw StateError("state must be normalized to 1 within 1e-12");
  }
}

double OutcomeProbabilities::at(int outcome_a, int outcome_b) const {
  return as_array()[static_cast<std::size_t>(
      outcome_index(outcome_a, outcome_b))];
}

OutcomeProbabilities outcome_probabilities(const TwoQubitState& state,
                                           MeasurementAngle theta_a,
                                           MeasurementAngle theta_b) {
  validate(state);
  if (!std::isfinite(theta_a.radians) || !std::isfinite(theta_b.radians)) {
    throw DomainError("measurement angles must be finite");
  }
  std::array<double, 4> probs{};
  for (int a : {+1, -1}) {
    const auto ea = eigenvector(theta_a.radians, a);
    for (int b : {+1, -1}) {
      const auto eb = eigenvector(theta_b.radians, b);
      std::complex<double> amp = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          amp += ea[i] * eb[j] * state.amplitudes[2 * i + j];
        }
      }
      probs[static_cast<std::size_t>(outcome_index(a, b))] = std::norm(amp);
    }
  }
  return OutcomeProbabilities{probs[0], probs[1], probs[2], probs[3]};
}

double correlation(const TwoQubitState& state, MeasurementAngle theta_a,
                   MeasurementAngle theta_b) {
  const OutcomeProbabilities p =
      outcome_probabilities(state, theta_a, theta_b);
  return p.pp - p.pm - p.mp + p.mm;
}

ChshAngles optimal_chsh_angles() {
  const double pi = 3.14159265358979323846;
  return ChshAngles{MeasurementAngle{0.0}, MeasurementAngle{0.5 * pi},
                    MeasurementAngle{0.75 * pi}, MeasurementAngle{0.25 * pi}};
}

double chsh_value(const TwoQubitState& state, const ChshAngles& angles) {
  const double e00 = correlation(state, angles.x0, angles.y0);
  const double e10 = correlation(state, angles.x1, angles.y0);
  const double e01 = correlation(state, angles.x0, angles.y1);
  const double e11 = correlation(state, angles.x1, angles.y1);
  return -e00 + e10 + e01 + e11;
}

}  // namespace supermeasure
