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

#include "supermeasure/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "supermeasure/errors.hpp"
#include "supermeasure/summation.hpp"

namespace supermeasure {

namespace {

constexpr std::size_t kKsMinSample = 50;
constexpr double kMinExpectedCell = 5.0;

bool is_sorted_ascending(std::span<const double> v) {
  return std::is_sorted(v.begin(), v.end());
}

}  // namespace

TestReport make_report(double statistic, double p_value, double alpha,
                       std::string method) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (0, 1)");
  }
  TestReport r;
  r.statistic = statistic;
  r.p_value = p_value;
  r.alpha = alpha;
  r.verdict = p_value < alpha ? "reject" : "fail-to-reject";
  r.method = std::move(method);
  return r;
}

double kolmogorov_tail(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 1.18) {
    // Dual theta-series form, accurate where the alternating series is slow.
    const double pi = 3.14159265358979323846;
    const double s = std::exp(-pi * pi / (8.0 * t * t));
    const double cdf = std::sqrt(2.0 * pi) / t *
                       (s + std::pow(s, 9.0) + std::pow(s, 25.0) +
                        std::pow(s, 49.0));
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  const double w = std::exp(-2.0 * t * t);
  const double q = 2.0 * (w - std::pow(w, 4.0) + std::pow(w, 9.0) -
                          std::pow(w, 16.0));
  return std::clamp(q, 0.0, 1.0);
}

double ks_statistic(std::span<const double> sorted_a,
                    std::span<const double> sorted_b) {
  if (sorted_a.empty() || sorted_b.empty()) {
    throw InsufficientDataError("KS statistic needs non-empty samples");
  }
  if (!is_sorted_ascending(sorted_a) || !is_sorted_ascending(sorted_b)) {
    throw DomainError("KS statistic inputs must be sorted ascending");
  }
  const double na = static_cast<double>(sorted_a.size());
  const double nb = static_cast<double>(sorted_b.size());
  std::size_t ia = 0;
  std::size_t ib = 0;
  double d = 0.0;
  while (ia < sorted_a.size() && ib < sorted_b.size()) {
    const double x = std::min(sorted_a[ia], sorted_b[ib]);
    while (ia < sorted_a.size() && sorted_a[ia] <= x) ++ia;
    while (ib < sorted_b.size() && sorted_b[ib] <= x) ++ib;
    d = std::max(d, std::abs(static_cast<double>(ia) / na -
                             static_cast<double>(ib) / nb));
  }
  return d;
}

TestReport ks_two_sample_sorted(std::span<const double> sorted_a,
                                std::span<const double> sorted_b,
                                double alpha) {
  if (sorted_a.size() < kKsMinSample || sorted_b.size() < kKsMinSample) {
    throw InsufficientDataError(
        "two-sample KS needs at least 50 points per sample");
  }
  const double d = ks_statistic(sorted_a, sorted_b);
  const double na = static_cast<double>(sorted_a.size());
  const double nb = static_cast<double>(sorted_b.size());
  const double ne = na * nb / (na + nb);
  const double p = kolmogorov_tail(std::sqrt(ne) * d);
  return make_report(d, p, alpha, "ks-two-sample");
}

TestReport ks_two_sample(std::span<const double> a, std::span<const double> b,
                         double alpha) {
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return ks_two_sample_sorted(sa, sb, alpha);
}

TestReport chi_square_gof(std::span<const std::uint64_t> counts,
                          std::span<const double> expected, double alpha) {
  if (counts.size() != expected.size()) {
    throw DomainError("counts and expected must have equal length");
  }
  if (counts.size() < 2) {
    throw InsufficientDataError("chi-square needs at least two cells");
  }
  CompensatedSum observed_total;
  CompensatedSum expected_total;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (expected[i] < kMinExpectedCell) {
      throw SparseCellError("expected cell count below 5");
    }
    observed_total.add(static_cast<double>(counts[i]));
    expected_total.add(expected[i]);
  }
  if (std::abs(observed_total.value() - expected_total.value()) > 1e-6) {
    throw DomainError("expected counts must total the observed count");
  }
  CompensatedSum stat;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double diff = static_cast<double>(counts[i]) - expected[i];
    stat.add(diff * diff / expected[i]);
  }
  const double dof = static_cast<double>(counts.size() - 1);
  const double p = boost::math::gamma_q(dof / 2.0, stat.value() / 2.0);
  return make_report(stat.value(), p, alpha, "chi-square-gof");
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw DomainError("total variation needs equal-length distributions");
  }
  if (p.empty()) {
    throw DomainError("total variation needs non-empty distributions");
  }
  CompensatedSum sp;
  CompensatedSum sq;
  CompensatedSum dist;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) {
      throw DomainError("distributions must be non-negative");
    }
    sp.add(p[i]);
    sq.add(q[i]);
    dist.add(std::abs(p[i] - q[i]));
  }
  if (std::abs(sp.value() - 1.0) > 1e-9 || std::abs(sq.value() - 1.0) > 1e-9) {
    throw DomainError("distributions must each sum to 1 within 1e-9");
  }
  return 0.5 * dist.value();
}

ConfidenceInterval binomial_ci(std::uint64_t successes, std::uint64_t trials,
                               double level) {
  if (trials == 0) {
    throw InsufficientDataError("binomial interval needs at least one trial");
  }
  if (successes > trials) {
    throw DomainError("successes cannot exceed trials");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("confidence level must lie in (0, 1)");
  }
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const boost::math::normal_distribution<double> normal;
  const double z = boost::math::quantile(normal, 0.5 * (1.0 + level));
  const double half = z * std::sqrt(phat * (1.0 - phat) / n);
  return ConfidenceInterval{std::max(0.0, phat - half),
                            std::min(1.0, phat + half)};
}

}  // namespace supermeasure
