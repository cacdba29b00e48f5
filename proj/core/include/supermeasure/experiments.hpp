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
// Batch experiment driver: a parsed flat config selects one experiment,
// run_experiment computes a machine-readable result document plus
// plot-ready CSV payloads, and write_outputs lays them down on disk. All
// randomness flows from the single config seed through labeled stream
// derivation, so a rerun of the same config reproduces every metric byte
// for byte (only the timestamp and wall-clock runtime differ).

#ifndef SUPERMEASURE_EXPERIMENTS_HPP_
#define SUPERMEASURE_EXPERIMENTS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "supermeasure/lorenz.hpp"
#include "supermeasure/quantum.hpp"

namespace supermeasure {

// Flat "key = value" text with [section] headers; keys are reported as
// "section.key" ("key" before any section header). Later duplicates win.
// '#' and ';' start comments.
std::map<std::string, std::string> parse_config_text(const std::string& text,
                                                     const std::string& name);
std::map<std::string, std::string> parse_config_file(const std::string& path);

struct ExperimentConfig {
  std::string experiment;  // chsh, sample-construct, niven, closure,
                           // exclusivity, lorenz, si-test
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double alpha = 0.01;
  std::string output_dir = ".";

  // chsh / si-test. Absent means the experiment must not need them.
  std::optional<ChshAngles> angles;

  // niven / exclusivity.
  int max_denominator = 0;

  // closure / exclusivity.
  std::uint64_t p = 0;
  std::size_t trials = 0;

  // si-test: number of independent audit repetitions.
  std::size_t repetitions = 1;

  // lorenz.
  LorenzParams lorenz;
  double dt = 0.02;
  std::size_t steps = 1000000;
  int cells_per_axis = 32;
  double perturbation = 40.0;
};

// Resolves and validates raw key-value pairs into a typed config. Missing
// required fields and malformed values raise ConfigError naming the field.
ExperimentConfig config_from_map(
    const std::map<std::string, std::string>& values);

ExperimentConfig load_config(const std::string& path);

// The outcome of one experiment run: the result.json document plus named
// CSV payloads. `document` always carries the keys {experiment, seed,
// parameters, metrics, verdicts, runtime_ms, timestamp}, in that order.
struct ExperimentResult {
  nlohmann::ordered_json document;
  std::vector<std::pair<std::string, std::string>> files;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Serializes the deterministic part of a result: the parameters, metrics,
// and verdicts subtrees (everything except timestamp and runtime). Two
// runs of one config must agree on this string byte for byte.
std::string deterministic_fingerprint(const ExperimentResult& result);

// Writes result.json and the CSV payloads under config.output_dir,
// creating the directory if needed. Returns the paths written.
std::vector<std::string> write_outputs(const ExperimentResult& result,
                                       const std::string& output_dir);

}  // namespace supermeasure

#endif  // SUPERMEASURE_EXPERIMENTS_HPP_
