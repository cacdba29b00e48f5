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

#include "supermeasure/experiments.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "format_util.hpp"
#include "supermeasure/chsh.hpp"
#include "supermeasure/errors.hpp"
#include "supermeasure/measure.hpp"
#include "supermeasure/rational.hpp"
#include "supermeasure/rng.hpp"
#include "supermeasure/sampling.hpp"
#include "supermeasure/stats.hpp"

namespace supermeasure {
namespace {

using nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end &&
         std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return text.substr(begin, end - begin);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  std::istringstream in(text);
  while (std::getline(in, current, ',')) out.push_back(trim(current));
  return out;
}

[[noreturn]] void bad_field(const std::string& field,
                            const std::string& detail) {
  throw ConfigError("field " + field + ": " + detail);
}

const std::string* find_value(
    const std::map<std::string, std::string>& values,
    const std::string& bare_key) {
  // Keys are stored as "section.key" or "key"; lookup is by bare name so
  // section placement is a readability choice, not an addressing one.
  const std::string* found = nullptr;
  for (const auto& [key, value] : values) {
    const std::size_t dot = key.rfind('.');
    const std::string bare = dot == std::string::npos ? key
                                                      : key.substr(dot + 1);
    if (bare == bare_key) found = &value;
  }
  return found;
}

std::string require_value(const std::map<std::string, std::string>& values,
                          const std::string& key) {
  const std::string* v = find_value(values, key);
  if (v == nullptr) throw ConfigError("missing required field: " + key);
  return *v;
}

double parse_double(const std::string& field, const std::string& text) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) bad_field(field, "trailing characters");
    return value;
  } catch (const std::invalid_argument&) {
    bad_field(field, "not a number: " + text);
  } catch (const std::out_of_range&) {
    bad_field(field, "out of range: " + text);
  }
}

std::uint64_t parse_u64(const std::string& field, const std::string& text) {
  try {
    std::size_t used = 0;
    const unsigned long long value = std::stoull(text, &used);
    if (used != text.size()) bad_field(field, "trailing characters");
    return static_cast<std::uint64_t>(value);
  } catch (const std::invalid_argument&) {
    bad_field(field, "not an unsigned integer: " + text);
  } catch (const std::out_of_range&) {
    bad_field(field, "out of range: " + text);
  }
}

int parse_int(const std::string& field, const std::string& text) {
  const std::uint64_t v = parse_u64(field, text);
  if (v > 1000000) bad_field(field, "implausibly large");
  return static_cast<int>(v);
}

// An angle token is either a plain number (radians) or "n/d", the
// fraction n/d of a full turn.
double parse_angle_token(const std::string& field, const std::string& token) {
  const std::size_t slash = token.find('/');
  if (slash == std::string::npos) return parse_double(field, token);
  const double num = parse_double(field, trim(token.substr(0, slash)));
  const double den = parse_double(field, trim(token.substr(slash + 1)));
  if (den == 0.0) bad_field(field, "zero denominator");
  return 2.0 * kPi * num / den;
}

ChshAngles parse_angles(const std::string& text) {
  const std::vector<std::string> tokens = split_commas(text);
  if (tokens.size() != 4) {
    bad_field("angles", "expected 4 comma-separated values");
  }
  return ChshAngles{MeasurementAngle{parse_angle_token("angles", tokens[0])},
                    MeasurementAngle{parse_angle_token("angles", tokens[1])},
                    MeasurementAngle{parse_angle_token("angles", tokens[2])},
                    MeasurementAngle{parse_angle_token("angles", tokens[3])}};
}

std::string iso_utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buffer;
}

ordered_json angles_json(const ChshAngles& angles) {
  return ordered_json::array({angles.x0.radians, angles.x1.radians,
                              angles.y0.radians, angles.y1.radians});
}

struct Payload {
  ordered_json parameters;
  ordered_json metrics;
  ordered_json verdicts;
  std::vector<std::pair<std::string, std::string>> files;
};

// ---------------------------------------------------------------------
// chsh

Payload run_chsh(const ExperimentConfig& cfg) {
  const TwoQubitState state = TwoQubitState::singlet();
  const SupermeasuredModel model = build_model(*cfg.angles, state);

  std::vector<Ensemble> ensembles;
  ensembles.reserve(4);
  for (const SettingPair& pair : kAllSettingPairs) {
    ensembles.push_back(sample_ensemble(model, pair, cfg.samples, cfg.seed));
  }

  ordered_json expectations;
  ordered_json oracle;
  std::array<double, 4> estimates{};
  double s_variance = 0.0;
  for (std::size_t i = 0; i < ensembles.size(); ++i) {
    const SettingPair pair = ensembles[i].settings();
    const double e = estimate_expectation(ensembles[i]);
    const double se = std::sqrt(std::max(0.0, 1.0 - e * e) /
                                static_cast<double>(cfg.samples));
    estimates[i] = e;
    s_variance += se * se;
    const std::string key =
        "e" + std::to_string(pair.k) + std::to_string(pair.l);
    expectations[key] = e;
    expectations[key + "_stderr"] = se;
    oracle[key] = correlation(state, cfg.angles->alice(pair.k),
                              cfg.angles->bob(pair.l));
  }
  const double s = chsh_statistic(ensembles[0], ensembles[1], ensembles[2],
                                  ensembles[3]);
  const double s_oracle = chsh_value(state, *cfg.angles);
  const TestReport si = physical_si_test(ensembles[0], ensembles[1],
                                         ensembles[2], ensembles[3],
                                         cfg.alpha);
  const double bell_tv = bell_si_violation(model);
  const double support_tv = support_indicator_tv(model);

  Payload payload;
  payload.parameters = {{"state", "singlet"},
                        {"angles_radians", angles_json(*cfg.angles)},
                        {"samples_per_pair", cfg.samples},
                        {"alpha", cfg.alpha}};
  payload.metrics = {{"expectations", expectations},
                     {"oracle_expectations", oracle},
                     {"s_value", s},
                     {"abs_s", std::abs(s)},
                     {"s_oracle", s_oracle},
                     {"ks_max_statistic", si.statistic},
                     {"ks_min_p_adjusted", si.p_value},
                     {"bell_si_tv", bell_tv},
                     {"support_indicator_tv", support_tv}};
  // The empirical |S| scatters around the model value, so the Tsirelson
  // check allows three combined standard errors of slack.
  const double s_slack = std::max(1e-9, 3.0 * std::sqrt(s_variance));
  payload.verdicts = {{"physical_si", si.verdict},
                      {"bell_si_violated", bell_tv > 1e-9},
                      {"exceeds_classical_bound", std::abs(s) > 2.0},
                      {"within_tsirelson",
                       std::abs(s) <= 2.0 * std::sqrt(2.0) + s_slack}};

  std::ostringstream curve;
  curve << "relative_angle,correlation\n";
  for (int i = 0; i <= 64; ++i) {
    const double theta = kPi * static_cast<double>(i) / 64.0;
    curve << detail::double_to_string(theta) << ','
          << detail::double_to_string(
                 correlation(state, MeasurementAngle{theta},
                             MeasurementAngle{0.0}))
          << '\n';
  }
  payload.files.emplace_back("correlations.csv", curve.str());
  return payload;
}

// ---------------------------------------------------------------------
// sample-construct

Payload run_sample_construct(const ExperimentConfig& cfg) {
  const SupermeasuredModel model =
      build_model(optimal_chsh_angles(), TwoQubitState::singlet());
  const Distribution rho = model_lambda_distribution(model);
  const BellDensity density = bell_density(rho, rho.base_measure());

  // 25 hidden-variable bands, aligned to the quadrature grid so the
  // reference probability and the sampled law agree exactly, crossed with
  // the 4 setting sectors: 100 rectangles.
  const std::size_t grid = rho.base_measure().grid_cells();
  struct Rect {
    double lo;
    double hi;
    SettingPair settings;
  };
  std::vector<Rect> rects;
  for (int band = 0; band < 25; ++band) {
    const double lo = static_cast<double>(grid * band / 25) /
                      static_cast<double>(grid);
    const double hi = static_cast<double>(grid * (band + 1) / 25) /
                      static_cast<double>(grid);
    for (const SettingPair& pair : kAllSettingPairs) {
      rects.push_back(Rect{lo, hi, pair});
    }
  }
  auto rect_pred = [](const Rect& r) {
    return SubsetPredicate([r](const StateSpacePoint& point) {
      return point.settings == r.settings && point.lambda >= r.lo &&
             point.lambda < r.hi;
    });
  };

  std::vector<double> reference;
  reference.reserve(rects.size());
  for (const Rect& r : rects) {
    reference.push_back(probability(density, rect_pred(r)));
  }

  std::vector<std::size_t> sizes;
  for (std::size_t n = 1000; n < cfg.samples; n *= 10) sizes.push_back(n);
  if (sizes.empty() || sizes.back() != cfg.samples) {
    sizes.push_back(cfg.samples);
  }

  ordered_json per_n = ordered_json::object();
  bool all_within = true;
  std::ostringstream convergence;
  convergence << "n,max_abs_error,bound\n";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const SampledSpace space = sample_space(
        rho, sizes[i], derive_seed(cfg.seed, "construct", i));
    double worst = 0.0;
    for (std::size_t r = 0; r < rects.size(); ++r) {
      const double p_n = empirical_probability(space, rect_pred(rects[r]));
      worst = std::max(worst, std::abs(p_n - reference[r]));
    }
    const double bound = 5.0 / std::sqrt(static_cast<double>(sizes[i]));
    all_within = all_within && worst <= bound;
    per_n[std::to_string(sizes[i])] = worst;
    convergence << sizes[i] << ',' << detail::double_to_string(worst) << ','
                << detail::double_to_string(bound) << '\n';
  }

  const std::size_t plot_n = std::min<std::size_t>(cfg.samples, 10000);
  const SampledSpace plot_space =
      sample_space(rho, plot_n, derive_seed(cfg.seed, "atoms", 0));
  std::ostringstream atoms;
  plot_space.to_csv(atoms);

  Payload payload;
  payload.parameters = {{"samples", cfg.samples},
                        {"rectangles", rects.size()},
                        {"source", "chsh-model-lambda-distribution"}};
  payload.metrics = {{"max_abs_error_by_n", per_n}};
  payload.verdicts = {{"within_bound", all_within}};
  payload.files.emplace_back("convergence.csv", convergence.str());
  payload.files.emplace_back("atoms.csv", atoms.str());
  return payload;
}

// ---------------------------------------------------------------------
// niven

Payload run_niven(const ExperimentConfig& cfg) {
  const std::vector<NivenEntry> entries = scan_niven(cfg.max_denominator);
  static const std::array<int, 5> kNivenDenominators = {1, 2, 3, 4, 6};

  std::size_t rational_count = 0;
  bool set_exact = true;
  std::ostringstream csv;
  csv << "numerator,denominator,classification,value\n";
  for (const NivenEntry& entry : entries) {
    const bool rational = entry.value.has_value();
    const bool in_set =
        std::find(kNivenDenominators.begin(), kNivenDenominators.end(),
                  entry.denominator.convert_to<int>()) !=
        kNivenDenominators.end();
    if (rational != in_set) set_exact = false;
    if (rational) ++rational_count;
    csv << entry.numerator << ',' << entry.denominator << ','
        << (rational ? "rational" : "irrational") << ',';
    if (rational) {
      std::ostringstream value;
      value << *entry.value;
      csv << value.str();
    }
    csv << '\n';
  }

  Payload payload;
  payload.parameters = {{"max_denominator", cfg.max_denominator}};
  payload.metrics = {{"fractions_checked", entries.size()},
                     {"rational_count", rational_count}};
  payload.verdicts = {{"rational_exactly_at_niven_denominators", set_exact}};
  payload.files.emplace_back("niven.csv", csv.str());
  return payload;
}

// ---------------------------------------------------------------------
// closure

Payload run_closure(const ExperimentConfig& cfg) {
  const BigInt p(cfg.p);
  std::optional<double> sampled;
  std::optional<double> exhaustive;
  if (cfg.p >= 4) {
    sampled = closure_failure_rate(p, cfg.trials, cfg.seed);
  }
  if (cfg.p <= 16) {
    exhaustive = closure_failure_exhaustive(p);
  }

  std::ostringstream csv;
  csv << "p,trials,failure_rate\n";
  if (sampled.has_value()) {
    csv << cfg.p << ',' << cfg.trials << ','
        << detail::double_to_string(*sampled) << '\n';
  }
  if (exhaustive.has_value()) {
    const std::uint64_t enumerated =
        (cfg.p - 1) * (cfg.p - 1) * cfg.p * cfg.p;
    csv << cfg.p << ',' << enumerated << ','
        << detail::double_to_string(*exhaustive) << '\n';
  }

  const double rate = sampled.has_value() ? *sampled : *exhaustive;
  Payload payload;
  payload.parameters = {{"p", cfg.p}, {"trials", cfg.trials}};
  payload.metrics = ordered_json::object();
  if (sampled.has_value()) payload.metrics["failure_rate"] = *sampled;
  if (exhaustive.has_value()) {
    payload.metrics["exhaustive_failure_rate"] = *exhaustive;
  }
  payload.verdicts = {{"closure_violated", rate > 0.0},
                      {"generic_failure", rate >= 0.99}};
  payload.files.emplace_back("closure.csv", csv.str());
  return payload;
}

// ---------------------------------------------------------------------
// exclusivity

Payload run_exclusivity(const ExperimentConfig& cfg) {
  const BigInt p(cfg.p);
  const ExclusivityScan scan = scan_exclusivity(cfg.max_denominator, p);

  std::ostringstream csv;
  csv << "numerator,denominator,admissible\n";
  const RationalAngle zero;
  for (int d = 1; d <= cfg.max_denominator; ++d) {
    for (int n = 0; n < d; ++n) {
      if (boost::multiprecision::gcd(BigInt(n), BigInt(d)) != 1) continue;
      const bool ok =
          admissible_setting_pair(zero, zero, RationalAngle(n, d), p);
      csv << n << ',' << d << ',' << (ok ? 1 : 0) << '\n';
    }
  }

  Payload payload;
  payload.parameters = {{"p", cfg.p},
                        {"max_denominator", cfg.max_denominator}};
  payload.metrics = {{"pairs_checked", scan.pairs_checked},
                     {"both_admissible", scan.both_admissible},
                     {"violations", scan.violations}};
  payload.verdicts = {{"exclusivity_holds", scan.violations == 0}};
  payload.files.emplace_back("exclusivity.csv", csv.str());
  return payload;
}

// ---------------------------------------------------------------------
// lorenz

Payload run_lorenz(const ExperimentConfig& cfg) {
  OccupancyGrid grid;
  grid.cells_per_axis = cfg.cells_per_axis;

  const OffAttractorWitness witness = off_attractor_witness(
      cfg.lorenz, cfg.dt, cfg.steps, cfg.perturbation, cfg.seed, grid);

  const Trajectory trajectory =
      integrate(cfg.lorenz, witness.initial_a, cfg.dt, cfg.steps);
  const std::size_t transient = default_transient(trajectory.size());
  const OccupancyMeasure occupancy =
      occupancy_measure(trajectory, grid, transient);
  const std::size_t post = trajectory.size() - transient;
  const std::size_t half = transient + post / 2;
  const OccupancyMeasure first_half = occupancy_measure(
      Trajectory(std::vector<Vec3>(trajectory.samples().begin() + transient,
                                   trajectory.samples().begin() + half),
                 cfg.dt),
      grid, 0);
  const OccupancyMeasure second_half = occupancy_measure(
      Trajectory(std::vector<Vec3>(trajectory.samples().begin() + half,
                                   trajectory.samples().end()),
                 cfg.dt),
      grid, 0);
  const double halves_tv = occupancy_tv(first_half, second_half);

  std::ostringstream traj_csv;
  traj_csv << "t,x,y,z\n";
  const std::size_t stride =
      std::max<std::size_t>(1, trajectory.size() / 10000);
  for (std::size_t i = 0; i < trajectory.size(); i += stride) {
    const Vec3& s = trajectory.samples()[i];
    traj_csv << detail::double_to_string(static_cast<double>(i) * cfg.dt)
             << ',' << detail::double_to_string(s.x) << ','
             << detail::double_to_string(s.y) << ','
             << detail::double_to_string(s.z) << '\n';
  }
  std::ostringstream occ_csv;
  occupancy.to_csv(occ_csv);

  Payload payload;
  payload.parameters = {{"sigma", cfg.lorenz.sigma},
                        {"r", cfg.lorenz.r},
                        {"beta", cfg.lorenz.beta},
                        {"dt", cfg.dt},
                        {"steps", cfg.steps},
                        {"cells_per_axis", cfg.cells_per_axis},
                        {"perturbation", cfg.perturbation}};
  payload.metrics = {
      {"two_start_tv", witness.tv},
      {"halves_tv", halves_tv},
      {"initial_a", ordered_json::array({witness.initial_a.x,
                                         witness.initial_a.y,
                                         witness.initial_a.z})},
      {"initial_b", ordered_json::array({witness.initial_b.x,
                                         witness.initial_b.y,
                                         witness.initial_b.z})}};
  payload.verdicts = {{"measure_independent_of_start", witness.tv < 0.05},
                      {"halves_consistent", halves_tv < 0.05}};
  payload.files.emplace_back("trajectory.csv", traj_csv.str());
  payload.files.emplace_back("occupancy.csv", occ_csv.str());
  return payload;
}

// ---------------------------------------------------------------------
// si-test

Payload run_si_test(const ExperimentConfig& cfg) {
  const SupermeasuredModel model = build_model(*cfg.angles, TwoQubitState::singlet());
  const Distribution rho = model_lambda_distribution(model);

  std::size_t physical_rejections = 0;
  std::size_t bell_rejections = 0;
  std::ostringstream csv;
  csv << "run,physical_p_value,physical_verdict,bell_statistic,"
         "bell_p_value,bell_verdict\n";
  SiAudit first{};
  for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
    const SampledSpace space =
        sample_space(rho, cfg.samples, derive_seed(cfg.seed, "si", rep));
    const SiAudit audit = si_audit(space, cfg.alpha);
    if (rep == 0) first = audit;
    if (audit.physical_si.verdict == "reject") ++physical_rejections;
    if (audit.bell_si.verdict == "reject") ++bell_rejections;
    csv << rep << ',' << detail::double_to_string(audit.physical_si.p_value)
        << ',' << audit.physical_si.verdict << ','
        << detail::double_to_string(audit.bell_si.statistic) << ','
        << detail::double_to_string(audit.bell_si.p_value) << ','
        << audit.bell_si.verdict << '\n';
  }

  Payload payload;
  payload.parameters = {{"angles_radians", angles_json(*cfg.angles)},
                        {"samples", cfg.samples},
                        {"alpha", cfg.alpha},
                        {"repetitions", cfg.repetitions}};
  payload.metrics = {{"physical_rejections", physical_rejections},
                     {"bell_rejections", bell_rejections},
                     {"first_physical_p_value", first.physical_si.p_value},
                     {"first_bell_statistic", first.bell_si.statistic},
                     {"first_bell_p_value", first.bell_si.p_value}};
  payload.verdicts = {
      {"physical_si_consistent", physical_rejections == 0},
      {"bell_si_rejected_every_run", bell_rejections == cfg.repetitions}};
  payload.files.emplace_back("si_runs.csv", csv.str());
  return payload;
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text,
                                                     const std::string& name) {
  std::map<std::string, std::string> values;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') {
      continue;
    }
    if (stripped.front() == '[') {
      if (stripped.back() != ']' || stripped.size() < 3) {
        throw ConfigError(name + ":" + std::to_string(line_number) +
                          ": malformed section header");
      }
      section = trim(stripped.substr(1, stripped.size() - 2));
      continue;
    }
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(name + ":" + std::to_string(line_number) +
                        ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(name + ":" + std::to_string(line_number) +
                        ": empty key");
    }
    values[section.empty() ? key : section + "." + key] = value;
  }
  return values;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

ExperimentConfig config_from_map(
    const std::map<std::string, std::string>& values) {
  ExperimentConfig cfg;
  cfg.experiment = require_value(values, "experiment");
  static const std::array<const char*, 7> kKnown = {
      "chsh",   "sample-construct", "niven",  "closure",
      "exclusivity", "lorenz",      "si-test"};
  if (std::find(kKnown.begin(), kKnown.end(), cfg.experiment) ==
      kKnown.end()) {
    throw ConfigError("unknown experiment: " + cfg.experiment);
  }

  if (const std::string* v = find_value(values, "seed")) {
    cfg.seed = parse_u64("seed", *v);
  }
  if (const std::string* v = find_value(values, "alpha")) {
    cfg.alpha = parse_double("alpha", *v);
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
      bad_field("alpha", "must lie in (0,1)");
    }
  }
  if (const std::string* v = find_value(values, "output_dir")) {
    cfg.output_dir = *v;
  }

  const bool needs_samples = cfg.experiment == "chsh" ||
                             cfg.experiment == "sample-construct" ||
                             cfg.experiment == "si-test";
  if (needs_samples) {
    cfg.samples = static_cast<std::size_t>(
        parse_u64("samples", require_value(values, "samples")));
    if (cfg.samples == 0) bad_field("samples", "must be positive");
  }
  if (cfg.experiment == "chsh" || cfg.experiment == "si-test") {
    cfg.angles = parse_angles(require_value(values, "angles"));
  }
  if (cfg.experiment == "niven" || cfg.experiment == "exclusivity") {
    cfg.max_denominator =
        parse_int("max_denominator", require_value(values, "max_denominator"));
    if (cfg.max_denominator < 1) bad_field("max_denominator", "must be >= 1");
  }
  if (cfg.experiment == "closure" || cfg.experiment == "exclusivity") {
    cfg.p = parse_u64("p", require_value(values, "p"));
    if (cfg.p < 2) bad_field("p", "must be at least 2");
  }
  if (cfg.experiment == "closure") {
    if (cfg.p >= 4) {
      cfg.trials = static_cast<std::size_t>(
          parse_u64("trials", require_value(values, "trials")));
      if (cfg.trials == 0) bad_field("trials", "must be positive");
    }
  }
  if (cfg.experiment == "si-test") {
    if (const std::string* v = find_value(values, "repetitions")) {
      cfg.repetitions =
          static_cast<std::size_t>(parse_u64("repetitions", *v));
      if (cfg.repetitions == 0) bad_field("repetitions", "must be positive");
    }
  }
  if (cfg.experiment == "lorenz") {
    if (const std::string* v = find_value(values, "sigma")) {
      cfg.lorenz.sigma = parse_double("sigma", *v);
    }
    if (const std::string* v = find_value(values, "r")) {
      cfg.lorenz.r = parse_double("r", *v);
    }
    if (const std::string* v = find_value(values, "beta")) {
      cfg.lorenz.beta = parse_double("beta", *v);
    }
    if (const std::string* v = find_value(values, "dt")) {
      cfg.dt = parse_double("dt", *v);
      if (!(cfg.dt > 0.0 && cfg.dt <= 0.05)) {
        bad_field("dt", "must lie in (0, 0.05]");
      }
    }
    if (const std::string* v = find_value(values, "steps")) {
      cfg.steps = static_cast<std::size_t>(parse_u64("steps", *v));
      if (cfg.steps == 0) bad_field("steps", "must be positive");
    }
    if (const std::string* v = find_value(values, "cells_per_axis")) {
      cfg.cells_per_axis = parse_int("cells_per_axis", *v);
      if (cfg.cells_per_axis < 1) {
        bad_field("cells_per_axis", "must be >= 1");
      }
    }
    if (const std::string* v = find_value(values, "perturbation")) {
      cfg.perturbation = parse_double("perturbation", *v);
      if (cfg.perturbation < 0.0) {
        bad_field("perturbation", "must be non-negative");
      }
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  return config_from_map(parse_config_file(path));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  Payload payload;
  if (config.experiment == "chsh") {
    payload = run_chsh(config);
  } else if (config.experiment == "sample-construct") {
    payload = run_sample_construct(config);
  } else if (config.experiment == "niven") {
    payload = run_niven(config);
  } else if (config.experiment == "closure") {
    payload = run_closure(config);
  } else if (config.experiment == "exclusivity") {
    payload = run_exclusivity(config);
  } else if (config.experiment == "lorenz") {
    payload = run_lorenz(config);
  } else if (config.experiment == "si-test") {
    payload = run_si_test(config);
  } else {
    throw ConfigError("unknown experiment: " + config.experiment);
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;

  ExperimentResult result;
  result.document = {
      {"experiment", config.experiment},
      {"seed", config.seed},
      {"parameters", payload.parameters},
      {"metrics", payload.metrics},
      {"verdicts", payload.verdicts},
      {"runtime_ms",
       std::chrono::duration_cast<std::chrono::milliseconds>(elapsed)
           .count()},
      {"timestamp", iso_utc_now()}};
  result.files = std::move(payload.files);
  return result;
}

std::string deterministic_fingerprint(const ExperimentResult& result) {
  ordered_json stable = {{"parameters", result.document.at("parameters")},
                         {"metrics", result.document.at("metrics")},
                         {"verdicts", result.document.at("verdicts")}};
  return stable.dump();
}

std::vector<std::string> write_outputs(const ExperimentResult& result,
                                       const std::string& output_dir) {
  namespace fs = std::filesystem;
  if (result.document.is_null() || result.document.empty()) {
    std::cerr << "warning: empty result set, nothing to write\n";
    return {};
  }
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) {
    throw Error("cannot create output directory " + output_dir + ": " +
                ec.message());
  }
  std::vector<std::string> written;
  auto write_file = [&](const std::string& name, const std::string& content) {
    const fs::path path = fs::path(output_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("short write to " + path.string());
    written.push_back(path.string());
  };
  write_file("result.json", result.document.dump(2) + "\n");
  for (const auto& [name, content] : result.files) {
    write_file(name, content);
  }
  return written;
}

}  // namespace supermeasure
