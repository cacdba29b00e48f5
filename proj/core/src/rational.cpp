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

#include "supermeasure/rational.hpp"

#include <cstddef>
#include <sstream>
#include <utility>

#include "supermeasure/errors.hpp"
#include "supermeasure/rng.hpp"

namespace supermeasure {
namespace {

using boost::multiprecision::denominator;
using boost::multiprecision::gcd;
using boost::multiprecision::numerator;
using boost::multiprecision::sqrt;

// Sign of sin(angle) for a canonical angle in [0,1) turns.
int sin_sign(const RationalAngle& angle) {
  if (angle.numerator() == 0) return 0;
  const BigInt twice = 2 * angle.numerator();
  if (twice == angle.denominator()) return 0;
  return twice < angle.denominator() ? +1 : -1;
}

// The resultant of two phasors has a phase that is a rational multiple of
// 2*pi only when the squared tangent of that phase is 0, 1/3, 1, 3, or
// infinite (the tangent counterpart of the rational-cosine
// classification). Given the exact squared tangent and the quadrant signs,
// returns the angle in turns, or empty when it is irrational.
// cos_sign == 0 encodes an infinite tangent.
std::optional<RationalAngle> phase_from_tan2(const BigRational& tan2,
                                             int sin_sign_in, int cos_sign) {
  if (cos_sign == 0) {
    if (sin_sign_in == 0) return std::nullopt;  // zero vector, caller handles
    return RationalAngle(sin_sign_in > 0 ? 1 : 3, 4);
  }
  if (sin_sign_in == 0) {
    return RationalAngle(cos_sign > 0 ? 0 : 1, cos_sign > 0 ? 1 : 2);
  }
  BigInt base_num;
  BigInt base_den;
  if (tan2 == BigRational(1, 3)) {
    base_num = 1;
    base_den = 12;
  } else if (tan2 == 1) {
    base_num = 1;
    base_den = 8;
  } else if (tan2 == 3) {
    base_num = 1;
    base_den = 6;
  } else {
    return std::nullopt;
  }
  const RationalAngle base(base_num, base_den);
  if (sin_sign_in > 0 && cos_sign > 0) return base;
  if (sin_sign_in > 0 && cos_sign < 0) {
    return RationalAngle(1, 2) - base;
  }
  if (sin_sign_in < 0 && cos_sign < 0) {
    return RationalAngle(1, 2) + base;
  }
  return RationalAngle(0, 1) - base;
}

SuperpositionVerdict fail(std::string reason) {
  return SuperpositionVerdict{false, std::move(reason), std::nullopt};
}

SuperpositionVerdict finish(const BigInt& m, const RationalAngle& phase,
                            const BigInt& p) {
  if (m > p) {
    return fail("resultant squared magnitude exceeds 1");
  }
  if (!phase.is_multiple_of(p)) {
    return fail("resultant phase not a multiple of 2*pi/p");
  }
  return SuperpositionVerdict{true, "sum lies in C_p",
                              RationalAmplitude(m, phase, p)};
}

std::string format_rational(const BigRational& value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

std::uint64_t to_u64_p(const BigInt& p, const char* what) {
  if (p < 1 || p > BigInt(1) << 20) {
    throw DomainError(std::string(what) + ": p must be in [1, 2^20]");
  }
  return p.convert_to<std::uint64_t>();
}

}  // namespace

RationalAngle::RationalAngle(BigInt numerator_in, BigInt denominator_in) {
  if (denominator_in == 0) {
    throw DomainError("RationalAngle: denominator must be nonzero");
  }
  if (denominator_in < 0) {
    numerator_in = -numerator_in;
    denominator_in = -denominator_in;
  }
  numerator_in %= denominator_in;
  if (numerator_in < 0) numerator_in += denominator_in;
  const BigInt g = gcd(numerator_in, denominator_in);
  numerator_ = numerator_in / g;
  denominator_ = denominator_in / g;
}

bool RationalAngle::is_multiple_of(const BigInt& p) const {
  if (p < 1) throw DomainError("RationalAngle: p must be positive");
  return p % denominator_ == 0;
}

RationalAngle operator+(const RationalAngle& a, const RationalAngle& b) {
  return RationalAngle(
      a.numerator_ * b.denominator_ + b.numerator_ * a.denominator_,
      a.denominator_ * b.denominator_);
}

RationalAngle operator-(const RationalAngle& a, const RationalAngle& b) {
  return RationalAngle(
      a.numerator_ * b.denominator_ - b.numerator_ * a.denominator_,
      a.denominator_ * b.denominator_);
}

std::optional<BigRational> niven_rational_cos(const RationalAngle& angle) {
  const BigInt& d = angle.denominator();
  if (d == 1) return BigRational(1);
  if (d == 2) return BigRational(-1);
  if (d == 3) return BigRational(-1, 2);
  if (d == 4) return BigRational(0);
  if (d == 6) return BigRational(1, 2);
  return std::nullopt;
}

RationalAmplitude::RationalAmplitude(BigInt m_in, RationalAngle phase_in,
                                     BigInt p_in)
    : m(std::move(m_in)), phase(phase_in), p(std::move(p_in)) {
  if (p < 1) throw DomainError("RationalAmplitude: p must be positive");
  if (m < 0 || m > p) {
    throw DomainError("RationalAmplitude: m must lie in [0, p]");
  }
}

CpState::CpState(std::vector<RationalAmplitude> amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) {
    throw DomainError("CpState: at least one amplitude required");
  }
  const BigInt& p = amplitudes_.front().p;
  BigInt sum = 0;
  for (const RationalAmplitude& a : amplitudes_) {
    if (a.p != p) {
      throw DomainError("CpState: amplitudes must share one p");
    }
    sum += a.m;
  }
  if (sum != p) {
    throw NormalizationError(
        "CpState: squared magnitudes must sum to exactly p");
  }
}

Verdict is_in_cp(
    const std::vector<std::pair<BigRational, RationalAngle>>& candidates,
    const BigInt& p) {
  if (p < 1) throw DomainError("is_in_cp: p must be positive");
  BigInt sum = 0;
  for (const auto& [r_squared, phase] : candidates) {
    if (r_squared < 0 || r_squared > 1) {
      return Verdict{false, "squared magnitude outside [0,1]"};
    }
    if (p % denominator(r_squared) != 0) {
      return Verdict{false, "squared-magnitude denominator does not divide p"};
    }
    if (!phase.is_multiple_of(p)) {
      return Verdict{false, "phase not a multiple of 2*pi/p"};
    }
    sum += numerator(r_squared) * (p / denominator(r_squared));
  }
  if (sum != p) {
    return Verdict{false, "squared magnitudes do not sum to 1"};
  }
  return Verdict{true, "all amplitudes in C_p and normalized"};
}

SuperpositionVerdict superposition_in_cp(const RationalAmplitude& a,
                                         const RationalAmplitude& b) {
  if (a.p != b.p) {
    throw DomainError("superposition_in_cp: amplitudes must share one p");
  }
  const BigInt& p = a.p;

  if (b.m == 0 || a.m == 0) {
    const RationalAmplitude& keep = b.m == 0 ? a : b;
    if (keep.m == 0) {
      return SuperpositionVerdict{true, "sum is the zero amplitude",
                                  RationalAmplitude(0, RationalAngle(), p)};
    }
    if (!keep.phase.is_multiple_of(p)) {
      return fail("zero addend, but the other phase is not a multiple of "
                  "2*pi/p");
    }
    return SuperpositionVerdict{true, "zero addend, sum equals the other "
                                      "amplitude",
                                keep};
  }

  const RationalAngle delta = b.phase - a.phase;
  const std::optional<BigRational> cos_delta = niven_rational_cos(delta);
  const BigInt product = a.m * b.m;
  const BigInt root = sqrt(product);
  const bool is_square = root * root == product;

  // With a right relative angle the cross term vanishes identically, so
  // the magnitude is rational no matter whether sqrt(m1*m2) is.
  if (cos_delta.has_value() && *cos_delta == 0) {
    const BigInt m_sum = a.m + b.m;
    const std::optional<RationalAngle> rel = phase_from_tan2(
        BigRational(b.m, a.m), sin_sign(delta), +1);
    if (!rel.has_value()) {
      return fail("resultant phase not a rational multiple of 2*pi");
    }
    return finish(m_sum, a.phase + *rel, p);
  }

  if (!is_square) {
    return fail("m1*m2 is not a perfect square");
  }
  if (!cos_delta.has_value()) {
    return fail("relative-phase cosine is irrational");
  }

  // cos(delta) in {1, -1, 1/2, -1/2}; the cross term 2*sqrt(m1*m2)*cos is
  // the exact integer 2*root*cos.
  const BigRational cross = BigRational(2 * root) * *cos_delta;
  const BigInt m_sum =
      a.m + b.m + numerator(cross) / denominator(cross);

  if (m_sum == 0) {
    return SuperpositionVerdict{true, "sum is the zero amplitude",
                                RationalAmplitude(0, RationalAngle(), p)};
  }

  std::optional<RationalAngle> rel;
  if (*cos_delta == 1) {
    rel = RationalAngle(0, 1);
  } else if (*cos_delta == -1) {
    // Resultant lies on the first phasor's axis, pointing with the larger
    // of the two magnitudes.
    rel = a.m > b.m ? RationalAngle(0, 1) : RationalAngle(1, 2);
  } else {
    // cos(delta) = +-1/2: tan(rel) = sqrt(3)*root / (2*m1 +- root).
    const BigInt half_sign = *cos_delta > 0 ? root : -root;
    const BigInt cos_scaled = 2 * a.m + half_sign;
    const int cos_sign = cos_scaled > 0 ? +1 : (cos_scaled < 0 ? -1 : 0);
    const BigRational tan2 =
        cos_sign == 0 ? BigRational(0)
                      : BigRational(3 * root * root, cos_scaled * cos_scaled);
    rel = phase_from_tan2(tan2, sin_sign(delta), cos_sign);
  }
  if (!rel.has_value()) {
    return fail("resultant phase not a rational multiple of 2*pi");
  }
  return finish(m_sum, a.phase + *rel, p);
}

double closure_failure_rate(const BigInt& p, std::size_t trials,
                            std::uint64_t seed) {
  if (p < 4) throw DomainError("closure_failure_rate: p must be at least 4");
  if (trials == 0) {
    throw InsufficientDataError("closure_failure_rate: trials must be >= 1");
  }
  const std::uint64_t pu = to_u64_p(p, "closure_failure_rate");
  const CounterRng rng(derive_seed(seed, "closure", 0));

  std::size_t failures = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const std::uint64_t base = 4 * static_cast<std::uint64_t>(i);
    const BigInt m1 = 1 + rng.below_at(base, pu - 1);
    const BigInt m2 = 1 + rng.below_at(base + 1, pu - 1);
    const BigInt n1 = rng.below_at(base + 2, pu);
    const BigInt n2 = rng.below_at(base + 3, pu);
    const RationalAmplitude a(m1, RationalAngle(n1, p), p);
    const RationalAmplitude b(m2, RationalAngle(n2, p), p);
    if (!superposition_in_cp(a, b).in_cp) ++failures;
  }
  return static_cast<double>(failures) / static_cast<double>(trials);
}

double closure_failure_exhaustive(const BigInt& p) {
  if (p < 2 || p > 16) {
    throw DomainError("closure_failure_exhaustive: p must be in [2, 16]");
  }
  const std::int64_t pi = p.convert_to<std::int64_t>();
  std::size_t total = 0;
  std::size_t failures = 0;
  for (std::int64_t m1 = 1; m1 < pi; ++m1) {
    for (std::int64_t m2 = 1; m2 < pi; ++m2) {
      for (std::int64_t n1 = 0; n1 < pi; ++n1) {
        for (std::int64_t n2 = 0; n2 < pi; ++n2) {
          const RationalAmplitude a(m1, RationalAngle(n1, p), p);
          const RationalAmplitude b(m2, RationalAngle(n2, p), p);
          ++total;
          if (!superposition_in_cp(a, b).in_cp) ++failures;
        }
      }
    }
  }
  return static_cast<double>(failures) / static_cast<double>(total);
}

bool admissible_setting_pair(const RationalAngle& lambda_phase,
                             const RationalAngle& x, const RationalAngle& y,
                             const BigInt& p) {
  if (p < 1) throw DomainError("admissible_setting_pair: p must be positive");
  const RationalAngle delta = (y - x) + lambda_phase;
  const std::optional<BigRational> cos_delta = niven_rational_cos(delta);
  if (!cos_delta.has_value()) return false;
  const BigRational weight = (*cos_delta + 1) / 2;
  return p % denominator(weight) == 0;
}

ExclusivityReport exclusivity_check(const RationalAngle& x0,
                                    const RationalAngle& y0,
                                    const RationalAngle& y1, const BigInt& p) {
  if (y0 == y1) {
    throw DomainError("exclusivity_check: the two settings must differ");
  }
  const RationalAngle reference;  // hidden phase fixed at 0
  ExclusivityReport report;
  report.first_admissible = admissible_setting_pair(reference, x0, y0, p);
  report.second_admissible = admissible_setting_pair(reference, x0, y1, p);
  report.difference_exceptional =
      niven_rational_cos(y1 - y0).has_value();
  const bool both = report.first_admissible && report.second_admissible;
  report.holds = !both || report.difference_exceptional;
  if (!both) {
    report.note = "at most one setting pair admissible";
  } else if (report.difference_exceptional) {
    report.note =
        "both admissible; the settings differ by an angle with rational "
        "cosine (exceptional case)";
  } else {
    report.note =
        "exclusivity violated: both admissible with a generic difference";
  }
  return report;
}

ExclusivityScan scan_exclusivity(int max_denominator, const BigInt& p) {
  if (max_denominator < 1) {
    throw DomainError("scan_exclusivity: max denominator must be >= 1");
  }
  // Admissibility depends only on the angle itself (x0 = 0, reference
  // hidden phase), so classify each reduced fraction once.
  struct Fraction {
    int num;
    int den;
    bool admissible;
  };
  const RationalAngle zero;
  std::vector<Fraction> fractions;
  for (int d = 1; d <= max_denominator; ++d) {
    for (int n = 0; n < d; ++n) {
      if (gcd(BigInt(n), BigInt(d)) != 1) continue;
      const RationalAngle y(n, d);
      fractions.push_back(
          Fraction{n, d, admissible_setting_pair(zero, zero, y, p)});
    }
  }

  ExclusivityScan scan;
  const std::size_t count = fractions.size();
  scan.pairs_checked = count * (count - 1) / 2;
  for (std::size_t i = 0; i < count; ++i) {
    if (!fractions[i].admissible) continue;
    for (std::size_t j = i + 1; j < count; ++j) {
      if (!fractions[j].admissible) continue;
      ++scan.both_admissible;
      const RationalAngle diff = RationalAngle(fractions[j].num,
                                               fractions[j].den) -
                                 RationalAngle(fractions[i].num,
                                               fractions[i].den);
      if (!niven_rational_cos(diff).has_value()) {
        ++scan.violations;
        std::ostringstream line;
        line << fractions[i].num << "/" << fractions[i].den << " and "
             << fractions[j].num << "/" << fractions[j].den
             << " both admissible with generic difference";
        scan.violation_lines.push_back(line.str());
      }
    }
  }
  return scan;
}

std::vector<NivenEntry> scan_niven(int max_denominator) {
  if (max_denominator < 1) {
    throw DomainError("scan_niven: max denominator must be >= 1");
  }
  std::vector<NivenEntry> entries;
  for (int d = 1; d <= max_denominator; ++d) {
    for (int n = 0; n < d; ++n) {
      if (gcd(BigInt(n), BigInt(d)) != 1) continue;
      const RationalAngle angle(n, d);
      entries.push_back(NivenEntry{n, d, niven_rational_cos(angle)});
    }
  }
  return entries;
}

std::string niven_line(const NivenEntry& entry) {
  std::ostringstream out;
  out << entry.numerator << "/" << entry.denominator << " -> ";
  if (entry.value.has_value()) {
    out << "rational " << format_rational(*entry.value);
  } else {
    out << "irrational";
  }
  return out.str();
}

AdmissibleApproximation nearest_admissible_probability(
    const BigRational& target, const BigInt& p) {
  if (p < 1) {
    throw DomainError("nearest_admissible_probability: p must be positive");
  }
  if (target < 0 || target > 1) {
    throw DomainError(
        "nearest_admissible_probability: target must lie in [0,1]");
  }
  const BigRational scaled = target * p;
  // Round half up: floor((2*num + den) / (2*den)).
  BigInt m = (2 * numerator(scaled) + denominator(scaled)) /
             (2 * denominator(scaled));
  if (m < 0) m = 0;
  if (m > p) m = p;
  AdmissibleApproximation out;
  out.m = m;
  out.value = BigRational(m, p);
  out.error = target > out.value ? target - out.value : out.value - target;
  return out;
}

}  // namespace supermeasure
