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
// Exact arithmetic over the discretized amplitude set C_p: complex numbers
// with squared magnitude m/p (integer m) and phase 2*pi*n/p (integer n).
// Rationality of trigonometric values is decided by the classical
// characterization of rational cosines at rational angles, never by
// floating point: cos(2*pi*n/d) is rational exactly when the reduced
// denominator d is 1, 2, 3, 4, or 6, and then lies in {0, +-1/2, +-1}.

#ifndef SUPERMEASURE_RATIONAL_HPP_
#define SUPERMEASURE_RATIONAL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace supermeasure {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// An angle phi = 2*pi * numerator / denominator, stored reduced with
// 0 <= numerator/denominator < 1. The fraction numerator/denominator is
// the angle measured in turns.
class RationalAngle {
 public:
  RationalAngle() : numerator_(0), denominator_(1) {}
  RationalAngle(BigInt numerator, BigInt denominator);

  const BigInt& numerator() const { return numerator_; }
  const BigInt& denominator() const { return denominator_; }
  BigRational turns() const { return BigRational(numerator_, denominator_); }

  // phi = 2*pi*n/p for integer n, i.e. the reduced denominator divides p.
  bool is_multiple_of(const BigInt& p) const;

  friend bool operator==(const RationalAngle& a, const RationalAngle& b) {
    return a.numerator_ == b.numerator_ && a.denominator_ == b.denominator_;
  }
  friend RationalAngle operator+(const RationalAngle& a,
                                 const RationalAngle& b);
  friend RationalAngle operator-(const RationalAngle& a,
                                 const RationalAngle& b);

 private:
  BigInt numerator_;
  BigInt denominator_;
};

// The exact rational value of cos(angle) when it exists, empty when the
// cosine is irrational. Complete classification: rational only for reduced
// turn denominators 1, 2, 3, 4, 6, with values 1, -1, -1/2, 0, 1/2.
std::optional<BigRational> niven_rational_cos(const RationalAngle& angle);

// One amplitude of a C_p state: squared magnitude m/p and a phase. The
// magnitude bound 0 <= m <= p is enforced here; whether the phase is a
// multiple of 2*pi/p is a membership question answered by the verdict
// functions, not a structural invariant, so that near-miss candidates can
// be represented and classified.
struct RationalAmplitude {
  BigInt m;
  RationalAngle phase;
  BigInt p;

  RationalAmplitude(BigInt m_in, RationalAngle phase_in, BigInt p_in);
  RationalAmplitude() : m(0), p(1) {}

  friend bool operator==(const RationalAmplitude& a,
                         const RationalAmplitude& b) {
    return a.m == b.m && a.phase == b.phase && a.p == b.p;
  }
};

// A J-dimensional state whose amplitudes all live in one C_p and whose
// squared magnitudes sum to exactly p (the integer form of unit norm).
class CpState {
 public:
  explicit CpState(std::vector<RationalAmplitude> amplitudes);

  const std::vector<RationalAmplitude>& amplitudes() const {
    return amplitudes_;
  }
  std::size_t dimension() const { return amplitudes_.size(); }
  const BigInt& p() const { return amplitudes_.front().p; }

 private:
  std::vector<RationalAmplitude> amplitudes_;
};

struct Verdict {
  bool admissible = false;
  std::string reason;

  explicit operator bool() const { return admissible; }
};

// Membership test for a full candidate state: every squared magnitude must
// be m/p with integer 0 <= m <= p, every phase a multiple of 2*pi/p, and
// the magnitudes must sum to exactly 1 (sum of m equal to p).
Verdict is_in_cp(
    const std::vector<std::pair<BigRational, RationalAngle>>& candidates,
    const BigInt& p);

// Whether the sum of two C_p amplitudes is again a C_p amplitude, decided
// exactly. The squared magnitude of the sum is
//   (m1 + m2 + 2*sqrt(m1*m2)*cos(dphi)) / p,
// rational only when the cross term is rational; the resulting phase is
// classified through the exact tangent of the resultant. On success,
// `result` carries the summed amplitude.
struct SuperpositionVerdict {
  bool in_cp = false;
  std::string reason;
  std::optional<RationalAmplitude> result;

  explicit operator bool() const { return in_cp; }
};

SuperpositionVerdict superposition_in_cp(const RationalAmplitude& a,
                                         const RationalAmplitude& b);

// Fraction of uniformly drawn admissible amplitude pairs (squared
// magnitudes in [1, p-1], phases multiples of 2*pi/p) whose sum falls
// outside C_p. Deterministic per seed.
double closure_failure_rate(const BigInt& p, std::size_t trials,
                            std::uint64_t seed);

// The same fraction computed by enumerating every admissible pair; only
// feasible for small p (capped at 16).
double closure_failure_exhaustive(const BigInt& p);

// Whether the Born weight cos^2(delta/2) = (1 + cos(delta))/2 of the
// relative angle delta = (y - x) + lambda_phase is an integer multiple of
// 1/p, decided exactly.
bool admissible_setting_pair(const RationalAngle& lambda_phase,
                             const RationalAngle& x, const RationalAngle& y,
                             const BigInt& p);

// For a fixed first-side setting x0, examines whether the two second-side
// settings y0 and y1 can both carry admissible Born weights. They can
// only when their difference y1 - y0 has a rational cosine, and the
// report flags those exceptional differences explicitly.
struct ExclusivityReport {
  bool first_admissible = false;
  bool second_admissible = false;
  bool difference_exceptional = false;
  bool holds = false;  // not both admissible, or difference exceptional
  std::string note;
};

ExclusivityReport exclusivity_check(const RationalAngle& x0,
                                    const RationalAngle& y0,
                                    const RationalAngle& y1, const BigInt& p);

// Exhaustive sweep of exclusivity_check over all reduced-fraction angle
// pairs with denominators up to max_denominator (x0 fixed at 0).
struct ExclusivityScan {
  std::size_t pairs_checked = 0;
  std::size_t both_admissible = 0;    // all flagged exceptional or violations
  std::size_t violations = 0;         // both admissible, difference generic
  std::vector<std::string> violation_lines;
};

ExclusivityScan scan_exclusivity(int max_denominator, const BigInt& p);

// Classification of every reduced fraction n/d (0 <= n < d <= max) by
// rationality of cos(2*pi*n/d).
struct NivenEntry {
  BigInt numerator;
  BigInt denominator;
  std::optional<BigRational> value;
};

std::vector<NivenEntry> scan_niven(int max_denominator);

// Report line "n/d -> rational <value>" or "n/d -> irrational".
std::string niven_line(const NivenEntry& entry);

// The best approximation m/p (integer 0 <= m <= p) to a target probability
// in [0,1]; the error is at most 1/(2p).
struct AdmissibleApproximation {
  BigInt m;
  BigRational value;
  BigRational error;
};

AdmissibleApproximation nearest_admissible_probability(
    const BigRational& target, const BigInt& p);

}  // namespace supermeasure

#endif  // SUPERMEASURE_RATIONAL_HPP_
