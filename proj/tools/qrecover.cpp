// Copyright 2026 The qrecover Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qrecover demo | sweep | verify
//
// Exit status: 0 when no bound or inequality is violated, 1 on a violation,
// 2 on bad arguments or input errors.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qrecover/harness.hpp"

namespace {

constexpr int kViolation = 1;
constexpr int kUsageError = 2;

int run_demo(const std::string& channel, const std::string& input) {
  const qrecover::DemoResult r = qrecover::demo(channel, input);
  std::cout << r.text;
  return r.violation ? kViolation : 0;
}

int run_sweep(const std::string& config_path, const std::string& output, std::size_t threads,
              const std::string& format) {
  qrecover::SweepConfig cfg = qrecover::load_sweep_config(config_path);
  if (!output.empty()) cfg.output_path = output;
  if (threads > 0) cfg.threads = threads;
  if (format == "csv") cfg.format = qrecover::ReportFormat::kCsv;
  if (format == "json") cfg.format = qrecover::ReportFormat::kJson;

  const auto rows = qrecover::run_sweep(cfg);
  qrecover::write_report(rows, cfg);

  std::size_t asserted = 0;
  std::size_t violations = 0;
  std::size_t vacuous = 0;
  for (const auto& row : rows) {
    if (row.vacuous) ++vacuous;
    if (row.asserted()) ++asserted;
    if (row.violates()) ++violations;
  }
  std::fprintf(stderr, "sweep: %zu rows, %zu asserted, %zu vacuous, %zu violations\n", rows.size(), asserted,
               vacuous, violations);
  return violations == 0 ? 0 : kViolation;
}

int run_verify(const qrecover::VerifyConfig& cfg, bool json) {
  const qrecover::InequalitySummary s = qrecover::verify_inequalities(cfg);
  std::cout << (json ? s.to_json() : s.to_text());
  return s.total_violations() == 0 ? 0 : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement recovery for noisy quantum channels"};
  app.require_subcommand(1);

  std::string channel = "identity:d=2";
  std::string input = "bell";
  auto* demo_cmd = app.add_subcommand("demo", "Correct one channel on one input and print the report");
  demo_cmd->add_option("--channel", channel, "Channel spec, e.g. phaseflip:p=0.1")->capture_default_str();
  demo_cmd->add_option("--input", input, "Input spec: bell, uniform-k, lambda:..., amps:RxQ:...")
      ->capture_default_str();

  std::string config_path;
  std::string output;
  std::string format;
  std::size_t threads = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep from a config file");
  sweep_cmd->add_option("--config", config_path, "Config file (key=value or JSON)")->required();
  sweep_cmd->add_option("--output", output, "Override output_path");
  sweep_cmd->add_option("--format", format, "Override format")->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--threads", threads, "Override worker thread count");

  qrecover::VerifyConfig vcfg;
  bool json = false;
  auto* verify_cmd = app.add_subcommand("verify", "Check the distance inequalities on a random corpus");
  verify_cmd->add_option("--trials", vcfg.trials, "Random pairs")->capture_default_str();
  verify_cmd->add_option("--max-dim", vcfg.max_dim, "Largest dimension (2..16)")->capture_default_str();
  verify_cmd->add_option("--seed", vcfg.seed, "Base seed")->capture_default_str();
  verify_cmd->add_flag("--json", json, "Emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*demo_cmd) return run_demo(channel, input);
    if (*sweep_cmd) return run_sweep(config_path, output, threads, format);
    if (*verify_cmd) return run_verify(vcfg, json);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qrecover: %s\n", e.what());
    return kUsageError;
  }
  return kUsageError;
}
