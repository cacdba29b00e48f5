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

#ifndef SUPERMEASURE_TYPES_HPP_
#define SUPERMEASURE_TYPES_HPP_

#include <array>
#include <cstddef>

#include "supermeasure/errors.hpp"

namespace supermeasure {

// Pair of binary measurement-setting indices: k selects detector A's
// setting, l selects detector B's.
struct SettingPair {
  int k = 0;
  int l = 0;

  friend bool operator==(const SettingPair&, const SettingPair&) = default;
};

inline void validate(const SettingPair& s) {
  if ((s.k != 0 && s.k != 1) || (s.l != 0 && s.l != 1)) {
    throw DomainError("setting indices must be 0 or 1");
  }
}

// Index in [0, 4): 2k + l.
inline int setting_index(const SettingPair& s) { return 2 * s.k + s.l; }

inline constexpr std::array<SettingPair, 4> kAllSettingPairs = {
    SettingPair{0, 0}, SettingPair{0, 1}, SettingPair{1, 0},
    SettingPair{1, 1}};

// A point of the state space: a hidden-variable value in [0, 1] together
// with the setting pair it occurs with.
struct StateSpacePoint {
  double lambda = 0.0;  // in [0, 1]
  SettingPair settings;
};

inline void validate(const StateSpacePoint& p) {
  if (!(p.lambda >= 0.0 && p.lambda <= 1.0)) {
    throw DomainError("hidden variable must lie in [0, 1]");
  }
  validate(p.settings);
}

// Detector angle in radians, measured in a single fixed plane.
struct MeasurementAngle {
  double radians = 0.0;
};

// One of the sixteen disjoint state-space cells: joint outcomes (a, b) in
// {+1, -1}^2 under setting pair (k, l). Within a setting pair the cells are
// ordered (++, +-, -+, --).
struct SubspaceLabel {
  int outcome_a = +1;
  int outcome_b = +1;
  SettingPair settings;

  friend bool operator==(const SubspaceLabel&, const SubspaceLabel&) = default;
};

inline void validate(const SubspaceLabel& c) {
  if ((c.outcome_a != +1 && c.outcome_a != -1) ||
      (c.outcome_b != +1 && c.outcome_b != -1)) {
    throw DomainError("outcomes must be +1 or -1");
  }
  validate(c.settings);
}

// Index of the outcome combination within a setting pair, in cell order
// (++, +-, -+, --).
inline int outcome_index(int outcome_a, int outcome_b) {
  return (outcome_a == +1 ? 0 : 2) + (outcome_b == +1 ? 0 : 1);
}

// Global cell index in [0, 16): outcome block first, setting pair within.
inline int cell_index(const SubspaceLabel& c) {
  return 4 * outcome_index(c.outcome_a, c.outcome_b) +
         setting_index(c.settings);
}

inline std::array<SubspaceLabel, 16> all_subspace_labels() {
  std::array<SubspaceLabel, 16> cells;
  std::size_t i = 0;
  for (int a : {+1, -1}) {
    for (int b : {+1, -1}) {
      for (const SettingPair& s : kAllSettingPairs) {
        cells[i++] = SubspaceLabel{a, b, s};
      }
    }
  }
  return cells;
}

}  // namespace supermeasure

#endif  // SUPERMEASURE_TYPES_HPP_
