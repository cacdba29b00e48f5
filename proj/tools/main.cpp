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
// Batch experiment driver. Exit codes: 0 success, 2 config validation
// failure, 3 runtime failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "supermeasure/errors.hpp"
#include "supermeasure/experiments.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

int run_command(const std::string& config_path,
                std::optional<std::uint64_t> seed,
                std::optional<std::size_t> samples,
                std::optional<std::string> output_dir) {
  supermeasure::ExperimentConfig config;
  try {
    config = supermeasure::load_config(config_path);
    if (seed.has_value()) config.seed = *seed;
    if (samples.has_value()) {
      if (*samples == 0) {
        throw supermeasure::ConfigError("field samples: must be positive");
      }
      config.samples = *samples;
    }
    if (output_dir.has_value()) config.output_dir = *output_dir;
  } catch (const supermeasure::ConfigError& error) {
    std::cerr << "config error: " << error.what() << "\n";
    return kExitValidation;
  }

  try {
    const supermeasure::ExperimentResult result =
        supermeasure::run_experiment(config);
    const std::vector<std::string> written =
        supermeasure::write_outputs(result, config.output_dir);
    for (const std::string& path : written) {
      std::cout << "wrote " << path << "\n";
    }
    return 0;
  } catch (const supermeasure::ConfigError& error) {
    std::cerr << "config error: " << error.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"supermeasure experiment driver"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::string> output_dir;

  CLI::App* run = app.add_subcommand("run", "run one experiment from a config");
  run->add_option("config", config_path, "path to the config file")
      ->required();
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--samples", samples, "override the config sample count");
  run->add_option("--output", output_dir, "override the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    return app.exit(error) == 0 ? 0 : kExitValidation;
  }

  return run_command(config_path, seed, samples, output_dir);
}
