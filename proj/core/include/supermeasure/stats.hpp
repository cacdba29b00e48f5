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

#ifndef SUPERMEASURE_STATS_HPP_
#define SUPERMEASURE_STATS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace supermeasure {

// Outcome of one hypothesis test. verdict is "reject" exactly when
// p_value < alpha.
struct TestReport {
  double statistic = 0.0;
  double p_value = 1.0;
  double alpha = 0.01;
  std::string verdict;  // "reject" or "fail-to-reject"
  std::string method;
};

TestReport make_report(double statistic, double p_value, double alpha,
                       std::string method);

// Upper tail Q(t) = P(K > t) of the asymptotic Kolmogorov distribution.
double kolmogorov_tail(double t);

// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.
// Inputs must be sorted ascending and non-empty.
double ks_statistic(std::span<const double> sorted_a,
                    std::span<const double> sorted_b);

// Two-sample KS test. The p-value uses the asymptotic Kolmogorov tail at
// effective size n_a * n_b / (n_a + n_b); both samples need at least 50
// points for the asymptotics to be meaningful. Inputs are copied and sorted.
TestReport ks_two_sample(std::span<const double> a, std::span<const double> b,
                         double alpha = 0.01);

// Same test for inputs that are already sorted ascending.
TestReport ks_two_sample_sorted(std::span<const double> sorted_a,
                                std::span<const double> sorted_b,
                                double alpha = 0.01);

// Chi-square goodness of fit with k - 1 degrees of freedom. Expected counts
// must each be at least 5 (SparseCellError otherwise) and must total the
// observed count within 1e-6.
TestReport chi_square_gof(std::span<const std::uint64_t> counts,
                          std::span<const double> expected,
                          double alpha = 0.01);

// Total variation distance between two finite distributions on the same
// index set: (1/2) * sum_i |p_i - q_i|. Each input must sum to 1 within
// 1e-9.
double total_variation(std::span<const double> p, std::span<const double> q);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 1.0;
};

// Normal-approximation confidence interval for a binomial proportion,
// clipped to [0, 1]. level is the two-sided coverage, in (0, 1).
ConfidenceInterval binomial_ci(std::uint64_t successes, std::uint64_t trials,
                               double level);

}  // namespace supermeasure

#endif  // SUPERMEASURE_STATS_HPP_
