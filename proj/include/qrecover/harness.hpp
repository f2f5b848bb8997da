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

// Experiment front end: correction sweeps over a channel family, randomized
// inequality verification, and single-shot demos.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qrecover/channels.hpp"
#include "qrecover/random.hpp"
#include "qrecover/recovery.hpp"
#include "qrecover/states.hpp"

namespace qrecover {

/// Slack for asserting the fidelity bounds on a correction outcome.
inline constexpr double kBoundSlack = 1e-8;

enum class ReportFormat { kCsv, kJson };

struct SweepConfig {
  /// Family name with optional fixed parameters, e.g. "phaseflip" or
  /// "depolarizing:d=3". The grid value fills the family's primary parameter.
  std::string channel_family;
  std::vector<double> param_grid;
  /// "bell", "uniform-k", "lambda:0.7,0.2,0.1", "amps:2x2:a,b,c,d" or "random-k".
  std::string input_spec = "bell";
  std::size_t trials_per_point = 1;
  std::uint64_t seed = 0;
  std::string output_path;  // empty: standard output
  ReportFormat format = ReportFormat::kCsv;
  /// Worker threads; output does not depend on this.
  std::size_t threads = 1;

  /// Throws std::invalid_argument on an empty grid, zero trials, or a grid
  /// value outside the family's range.
  void validate() const;
};

/// Flat key=value lines (# comments) or a JSON object with the field names
/// above. param_grid accepts a list or a "start:stop:step" range.
SweepConfig parse_sweep_config(const std::string& text);
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Grid start, start + step, ..., stop (inclusive within half a step).
std::vector<double> grid_range(double start, double stop, double step);

struct SweepRow {
  double param = 0.0;
  std::size_t trial = 0;
  double s_q = 0.0;
  double coherent_info = 0.0;
  double epsilon = 0.0;
  double achieved_f = 0.0;
  double bound_f = 0.0;
  double margin_f = 0.0;
  double achieved_fe = 0.0;
  double bound_fe = 0.0;
  double uhlmann_overlap = 0.0;
  double truncated_weight = 0.0;
  bool vacuous = false;

  /// Bounds are only asserted for truncation-free, non-vacuous rows.
  bool asserted() const { return !vacuous && truncated_weight <= 1e-12; }
  bool violates() const;
};

/// Column order of the CSV report.
const std::vector<std::string>& sweep_columns();

/// Input state for a spec string; `rng` is needed only for "random-k".
LabeledState parse_input_spec(const std::string& spec, Rng* rng = nullptr);

/// One row per (grid value, trial) in grid order. Point i, trial t draws
/// from stream_seed(seed, i, t): first the input (if random), then the
/// channel (if random).
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

std::string format_report(const std::vector<SweepRow>& rows, ReportFormat format);

/// Writes the report to cfg.output_path (or stdout when empty).
void write_report(const std::vector<SweepRow>& rows, const SweepConfig& cfg);

struct VerifyConfig {
  std::size_t trials = 1000;
  std::size_t max_dim = 8;
  std::uint64_t seed = 42;
  double inequality_tol = 1e-8;
  double monotonicity_slack = 1e-8;
  /// Draw sigma = rho in every trial.
  bool force_equal = false;
};

struct InequalitySummary {
  std::size_t trials = 0;
  std::size_t finite_relent = 0;
  std::size_t pinsker_violations = 0;
  std::size_t classical_pinsker_violations = 0;
  std::size_t measurement_bound_violations = 0;
  std::size_t fuchs_violations = 0;
  std::size_t chain_violations = 0;
  std::size_t relent_monotonicity_violations = 0;
  std::size_t trace_monotonicity_violations = 0;
  std::size_t fidelity_monotonicity_violations = 0;
  double min_pinsker_margin = kInfinity;
  double min_classical_pinsker_margin = kInfinity;
  double min_measurement_margin = kInfinity;
  double min_fuchs_margin = kInfinity;
  double min_chain_margin = kInfinity;
  double max_relent_increase = 0.0;
  double max_trace_dist_increase = 0.0;
  double max_fidelity_decrease = 0.0;

  std::size_t total_violations() const;
  std::string to_json() const;
  std::string to_text() const;
};

InequalitySummary verify_inequalities(const VerifyConfig& cfg);

struct DemoResult {
  std::string text;
  CorrectionOutcome outcome;
  DistanceReport re_distance;
  /// A non-vacuous, truncation-free bound failed.
  bool violation = false;
};

DemoResult demo(const std::string& channel_spec, const std::string& input_spec);

}  // namespace qrecover
