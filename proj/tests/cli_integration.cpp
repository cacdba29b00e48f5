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
// End-to-end checks of the command-line driver: spawns the real binary,
// inspects exit codes, stdout, and the files it leaves behind.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

int g_checks = 0;

#define REQUIRE(cond, msg)                                               \
  do {                                                                   \
    ++g_checks;                                                          \
    if (!(cond)) {                                                       \
      std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg \
                << "\n";                                                 \
      std::exit(1);                                                      \
    }                                                                    \
  } while (0)

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path workspace() {
  static const fs::path dir =
      fs::temp_directory_path() /
      ("supermeasure-cli-test-" + std::to_string(::getpid()));
  return dir;
}

// Runs the driver with the given argument string, capturing both streams.
RunResult run_cli(const std::string& args) {
  const fs::path out_file = workspace() / "stdout.txt";
  const fs::path err_file = workspace() / "stderr.txt";
  const std::string command = std::string(SUPERMEASURE_CLI_PATH) + " " +
                              args + " > " + out_file.string() + " 2> " +
                              err_file.string();
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path path = workspace() / name;
  std::ofstream out(path);
  out << body;
  return path;
}

nlohmann::ordered_json load_result(const fs::path& dir) {
  std::ifstream in(dir / "result.json");
  REQUIRE(in.good(), "result.json missing in " + dir.string());
  nlohmann::ordered_json parsed;
  in >> parsed;
  return parsed;
}

void pass(const std::string& name) {
  std::cout << "[PASS] " << name << "\n";
}

void test_successful_run_writes_outputs() {
  const fs::path out_dir = workspace() / "niven-out";
  const fs::path config = write_config(
      "niven.ini",
      "experiment = niven\nmax_denominator = 12\noutput_dir = " +
          out_dir.string() + "\n");
  const RunResult r = run_cli("run " + config.string());
  REQUIRE(r.exit_code == 0, "expected success, got " +
                                std::to_string(r.exit_code) + ": " + r.err);
  REQUIRE(r.out.find("wrote ") != std::string::npos,
          "stdout must list written files, got: " + r.out);
  REQUIRE(fs::exists(out_dir / "result.json"), "result.json not written");
  REQUIRE(fs::exists(out_dir / "niven.csv"), "niven.csv not written");
  const nlohmann::ordered_json doc = load_result(out_dir);
  REQUIRE(doc.at("experiment") == "niven", "wrong experiment in result");
  REQUIRE(doc.at("metrics").at("rational_count") == 8,
          "unexpected rational count");
  pass("successful run writes result.json and csv outputs");
}

void test_missing_field_is_a_config_error() {
  const fs::path config =
      write_config("missing.ini", "experiment = niven\n");
  const RunResult r = run_cli("run " + config.string());
  REQUIRE(r.exit_code == 2,
          "expected exit 2, got " + std::to_string(r.exit_code));
  REQUIRE(r.err.find("max_denominator") != std::string::npos,
          "error must name the missing field, got: " + r.err);
  pass("missing required field exits 2 and names the field");
}

void test_unreadable_config_is_a_config_error() {
  const RunResult r =
      run_cli("run " + (workspace() / "absent.ini").string());
  REQUIRE(r.exit_code == 2,
          "expected exit 2, got " + std::to_string(r.exit_code));
  REQUIRE(r.err.find("config error") != std::string::npos,
          "stderr must flag a config error, got: " + r.err);
  pass("unreadable config exits 2");
}

void test_unknown_experiment_is_a_config_error() {
  const fs::path config = write_config(
      "unknown.ini", "experiment = warp\nmax_denominator = 4\n");
  const RunResult r = run_cli("run " + config.string());
  REQUIRE(r.exit_code == 2,
          "expected exit 2, got " + std::to_string(r.exit_code));
  REQUIRE(r.err.find("unknown experiment") != std::string::npos,
          "stderr must name the bad experiment, got: " + r.err);
  pass("unknown experiment exits 2");
}

void test_unwritable_output_is_a_runtime_error() {
  const fs::path blocker = workspace() / "blocker";
  {
    std::ofstream out(blocker);
    out << "occupied\n";
  }
  const fs::path config = write_config(
      "blocked.ini",
      "experiment = niven\nmax_denominator = 6\noutput_dir = " +
          (blocker / "nested").string() + "\n");
  const RunResult r = run_cli("run " + config.string());
  REQUIRE(r.exit_code == 3,
          "expected exit 3, got " + std::to_string(r.exit_code));
  pass("unwritable output directory exits 3");
}

void test_seed_override_is_recorded() {
  const fs::path out_dir = workspace() / "seed-out";
  const fs::path config = write_config(
      "seeded.ini",
      "experiment = closure\np = 2\nseed = 1\noutput_dir = " +
          out_dir.string() + "\n");
  const RunResult r = run_cli("run " + config.string() + " --seed 7");
  REQUIRE(r.exit_code == 0, "override run failed: " + r.err);
  const nlohmann::ordered_json doc = load_result(out_dir);
  REQUIRE(doc.at("seed") == 7, "seed override not reflected in result");
  pass("--seed override lands in the result document");
}

void test_output_override_redirects_files() {
  const fs::path config_dir = workspace() / "ignored-out";
  const fs::path override_dir = workspace() / "override-out";
  const fs::path config = write_config(
      "redirect.ini",
      "experiment = niven\nmax_denominator = 6\noutput_dir = " +
          config_dir.string() + "\n");
  const RunResult r =
      run_cli("run " + config.string() + " --output " +
              override_dir.string());
  REQUIRE(r.exit_code == 0, "redirected run failed: " + r.err);
  REQUIRE(fs::exists(override_dir / "result.json"),
          "result.json missing from override directory");
  REQUIRE(!fs::exists(config_dir / "result.json"),
          "result.json must not land in the config directory");
  pass("--output override redirects all files");
}

void test_reruns_are_reproducible() {
  const fs::path dir_a = workspace() / "repro-a";
  const fs::path dir_b = workspace() / "repro-b";
  const fs::path config = write_config(
      "repro.ini",
      "experiment = chsh\nseed = 42\nsamples = 5000\n"
      "angles = 0, 1/4, 3/8, 1/8\n");
  const RunResult ra =
      run_cli("run " + config.string() + " --output " + dir_a.string());
  const RunResult rb =
      run_cli("run " + config.string() + " --output " + dir_b.string());
  REQUIRE(ra.exit_code == 0 && rb.exit_code == 0,
          "reproducibility runs failed");
  const nlohmann::ordered_json a = load_result(dir_a);
  const nlohmann::ordered_json b = load_result(dir_b);
  REQUIRE(a.at("parameters") == b.at("parameters"),
          "parameters differ between identical runs");
  REQUIRE(a.at("metrics") == b.at("metrics"),
          "metrics differ between identical runs");
  REQUIRE(a.at("verdicts") == b.at("verdicts"),
          "verdicts differ between identical runs");
  REQUIRE(slurp(dir_a / "correlations.csv") ==
              slurp(dir_b / "correlations.csv"),
          "csv outputs differ between identical runs");
  pass("identical invocations reproduce metrics and csv bytes");
}

void test_sample_override_changes_the_run() {
  const fs::path out_dir = workspace() / "samples-out";
  const fs::path config = write_config(
      "samples.ini",
      "experiment = chsh\nseed = 42\nsamples = 5000\n"
      "angles = 0, 1/4, 3/8, 1/8\noutput_dir = " + out_dir.string() + "\n");
  const RunResult r = run_cli("run " + config.string() + " --samples 6000");
  REQUIRE(r.exit_code == 0, "samples override failed: " + r.err);
  const nlohmann::ordered_json doc = load_result(out_dir);
  REQUIRE(doc.at("parameters").at("samples_per_pair") == 6000,
          "samples override not reflected");
  const RunResult zero =
      run_cli("run " + config.string() + " --samples 0");
  REQUIRE(zero.exit_code == 2, "samples = 0 must fail validation");
  pass("--samples override is applied and validated");
}

void test_no_arguments_prints_usage() {
  const RunResult r = run_cli("");
  REQUIRE(r.exit_code == 2,
          "expected exit 2 with no arguments, got " +
              std::to_string(r.exit_code));
  pass("bare invocation exits 2");
}

void test_help_exits_cleanly() {
  const RunResult r = run_cli("--help");
  REQUIRE(r.exit_code == 0,
          "expected exit 0 for --help, got " + std::to_string(r.exit_code));
  REQUIRE(r.out.find("run") != std::string::npos,
          "help text must mention the run subcommand");
  pass("--help exits 0 with usage text");
}

}  // namespace

int main() {
  fs::remove_all(workspace());
  fs::create_directories(workspace());

  test_successful_run_writes_outputs();
  test_missing_field_is_a_config_error();
  test_unreadable_config_is_a_config_error();
  test_unknown_experiment_is_a_config_error();
  test_unwritable_output_is_a_runtime_error();
  test_seed_override_is_recorded();
  test_output_override_redirects_files();
  test_reruns_are_reproducible();
  test_sample_override_changes_the_run();
  test_no_arguments_prints_usage();
  test_help_exits_cleanly();

  fs::remove_all(workspace());
  std::cout << "all cli integration checks passed (" << g_checks
            << " assertions)\n";
  return 0;
}
