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

#include "qrecover/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qrecover/measures.hpp"

namespace qrecover {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw std::invalid_argument(what + ": not a number: '" + text + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw std::invalid_argument(what + ": not a non-negative integer: '" + text + "'");
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// "0.5", "-0.5i", "0.5+0.25i", "1e-3-2j"
Complex parse_complex(std::string text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty amplitude");
  const char last = text.back();
  if (last != 'i' && last != 'j') return parse_double(text, "amplitude");
  const std::string body = text.substr(0, text.size() - 1);
  std::size_t split_at = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  auto imag_of = [](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double(s, "amplitude");
  };
  if (split_at == std::string::npos) return {0.0, imag_of(body)};
  return {parse_double(body.substr(0, split_at), "amplitude"), imag_of(body.substr(split_at))};
}

std::size_t parse_positive(const std::string& text, const std::string& what) {
  const auto v = parse_u64(text, what);
  if (v == 0) throw std::invalid_argument(what + " must be positive");
  return static_cast<std::size_t>(v);
}

ChannelSpec spec_for_point(const SweepConfig& cfg, double value) {
  ChannelSpec spec = parse_channel_spec(cfg.channel_family);
  const std::string key = spec.primary_param();
  if (!key.empty()) spec.params[key] = value;
  return spec;
}

SweepRow row_from(double param, std::size_t trial, const CorrectionOutcome& out) {
  SweepRow row;
  row.param = param;
  row.trial = trial;
  row.s_q = out.loss.s_q;
  row.coherent_info = out.loss.coherent_info;
  row.epsilon = out.epsilon;
  row.achieved_f = out.achieved_f;
  row.bound_f = out.bound_f;
  row.margin_f = out.margin_f();
  row.achieved_fe = out.achieved_fe;
  row.bound_fe = out.bound_fe;
  row.uhlmann_overlap = out.uhlmann_overlap;
  row.truncated_weight = out.truncated_weight;
  row.vacuous = out.vacuous();
  return row;
}

}  // namespace

void SweepConfig::validate() const {
  if (channel_family.empty()) throw std::invalid_argument("sweep config: channel_family is empty");
  if (param_grid.empty()) throw std::invalid_argument("sweep config: param_grid is empty");
  if (trials_per_point == 0) throw std::invalid_argument("sweep config: trials_per_point must be >= 1");
  if (threads == 0) throw std::invalid_argument("sweep config: threads must be >= 1");
  Rng probe(0);
  for (double v : param_grid) {
    try {
      build_channel(spec_for_point(*this, v), &probe);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("sweep config: grid value " + format_double(v) + " rejected: " + e.what());
    }
  }
  // Fixed inputs are checked up front; random ones per trial.
  if (input_spec.rfind("random-", 0) == 0) {
    parse_positive(input_spec.substr(7), "random input dimension");
  } else {
    parse_input_spec(input_spec);
  }
}

std::vector<double> grid_range(double start, double stop, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid range: step must be positive");
  if (stop < start) throw std::invalid_argument("grid range: stop below start");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5));
  std::vector<double> out;
  for (std::size_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

namespace {

std::vector<double> parse_grid_text(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 3)
    return grid_range(parse_double(parts[0], "grid start"), parse_double(parts[1], "grid stop"),
                      parse_double(parts[2], "grid step"));
  std::vector<double> out;
  for (const auto& item : split(text, ','))
    if (!item.empty()) out.push_back(parse_double(item, "param_grid"));
  return out;
}

ReportFormat parse_format(const std::string& text) {
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "json") return ReportFormat::kJson;
  throw std::invalid_argument("sweep config: format must be csv or json, got '" + text + "'");
}

void assign_field(SweepConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "channel_family") cfg.channel_family = value;
  else if (key == "param_grid") cfg.param_grid = parse_grid_text(value);
  else if (key == "input_spec") cfg.input_spec = value;
  else if (key == "trials_per_point") cfg.trials_per_point = parse_u64(value, key);
  else if (key == "seed") cfg.seed = parse_u64(value, key);
  else if (key == "output_path") cfg.output_path = value;
  else if (key == "format") cfg.format = parse_format(value);
  else if (key == "threads") cfg.threads = parse_u64(value, key);
  else throw std::invalid_argument("sweep config: unknown key '" + key + "'");
}

std::string scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return format_double(v.get<double>());
  throw std::invalid_argument("sweep config: unsupported JSON value " + v.dump());
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& text) {
  SweepConfig cfg;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument(std::string("sweep config: invalid JSON: ") + e.what());
    }
    for (const auto& [key, value] : doc.items()) {
      if (key == "param_grid" && value.is_array()) {
        cfg.param_grid.clear();
        for (const auto& x : value) {
          if (!x.is_number()) throw std::invalid_argument("sweep config: param_grid entries must be numbers");
          cfg.param_grid.push_back(x.get<double>());
        }
      } else {
        assign_field(cfg, key, scalar_text(value));
      }
    }
  } else {
    std::stringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("sweep config line " + std::to_string(lineno) + ": expected key=value");
      assign_field(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }
  cfg.validate();
  return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sweep config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_sweep_config(buf.str());
}

bool SweepRow::violates() const {
  return asserted() && (margin_f < -kBoundSlack || achieved_fe - bound_fe < -kBoundSlack);
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {
      "param",       "trial",    "s_q",      "coherent_info",   "epsilon",          "achieved_f", "bound_f",
      "margin_f",    "achieved_fe", "bound_fe", "uhlmann_overlap", "truncated_weight", "vacuous"};
  return cols;
}

LabeledState parse_input_spec(const std::string& spec_in, Rng* rng) {
  const std::string spec = trim(spec_in);
  if (spec == "bell") return entangled_input({0.5, 0.5}, 2);
  if (spec.rfind("uniform-", 0) == 0) {
    const std::size_t k = parse_positive(spec.substr(8), "uniform input size");
    return entangled_input(std::vector<double>(k, 1.0 / static_cast<double>(k)), k);
  }
  if (spec.rfind("lambda:", 0) == 0) {
    std::vector<double> lambda;
    for (const auto& item : split(spec.substr(7), ',')) lambda.push_back(parse_double(item, "lambda"));
    return entangled_input(lambda, lambda.size());
  }
  if (spec.rfind("random-", 0) == 0) {
    const std::size_t k = parse_positive(spec.substr(7), "random input dimension");
    if (rng == nullptr) throw std::invalid_argument("input spec " + spec + " needs a random source");
    return LabeledState::pure(SubsystemLayout({"R", "Q"}, {k, k}), random_pure(k * k, *rng));
  }
  if (spec.rfind("amps:", 0) == 0) {
    const auto colon = spec.find(':', 5);
    if (colon == std::string::npos) throw std::invalid_argument("amps input needs amps:<dR>x<dQ>:<list>");
    const std::string shape = spec.substr(5, colon - 5);
    const auto x = shape.find('x');
    if (x == std::string::npos) throw std::invalid_argument("amps input shape must be <dR>x<dQ>");
    const std::size_t dr = parse_positive(shape.substr(0, x), "amps dR");
    const std::size_t dq = parse_positive(shape.substr(x + 1), "amps dQ");
    StateVector v;
    for (const auto& item : split(spec.substr(colon + 1), ',')) v.push_back(parse_complex(item));
    if (v.size() != dr * dq) throw std::invalid_argument("amps input: expected dR*dQ amplitudes");
    const double nr = norm(v);
    if (nr == 0.0) throw std::invalid_argument("amps input: zero vector");
    for (auto& z : v) z /= nr;
    return LabeledState::pure(SubsystemLayout({"R", "Q"}, {dr, dq}), std::move(v));
  }
  throw std::invalid_argument("unknown input spec '" + spec + "'");
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const std::size_t points = cfg.param_grid.size();
  const std::size_t jobs = points * cfg.trials_per_point;
  std::vector<SweepRow> rows(jobs);

  auto run_one = [&](std::size_t job) {
    const std::size_t point = job / cfg.trials_per_point;
    const std::size_t trial = job % cfg.trials_per_point;
    const double param = cfg.param_grid[point];
    Rng rng(stream_seed(cfg.seed, point, trial));
    const LabeledState input = parse_input_spec(cfg.input_spec, &rng);
    const QuantumChannel ch = build_channel(spec_for_point(cfg, param), &rng);
    rows[job] = row_from(param, trial, correct(input, ch));
  };

  const std::size_t workers = std::min(cfg.threads, jobs);
  if (workers <= 1) {
    for (std::size_t j = 0; j < jobs; ++j) run_one(j);
    return rows;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs; j = next++) {
          try {
            run_one(j);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

namespace {

std::vector<std::string> row_cells(const SweepRow& r) {
  return {format_double(r.param),      std::to_string(r.trial),       format_double(r.s_q),
          format_double(r.coherent_info), format_double(r.epsilon),   format_double(r.achieved_f),
          format_double(r.bound_f),    format_double(r.margin_f),     format_double(r.achieved_fe),
          format_double(r.bound_fe),   format_double(r.uhlmann_overlap), format_double(r.truncated_weight),
          r.vacuous ? "1" : "0"};
}

}  // namespace

std::string format_report(const std::vector<SweepRow>& rows, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::kCsv) {
    const auto& cols = sweep_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
    out += '\n';
    for (const auto& r : rows) {
      const auto cells = row_cells(r);
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
      out += '\n';
    }
    return out;
  }
  ordered_json doc = ordered_json::object();
  doc["rows"] = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json j;
    j["param"] = r.param;
    j["trial"] = r.trial;
    j["s_q"] = r.s_q;
    j["coherent_info"] = r.coherent_info;
    j["epsilon"] = r.epsilon;
    j["achieved_f"] = r.achieved_f;
    j["bound_f"] = r.bound_f;
    j["margin_f"] = r.margin_f;
    j["achieved_fe"] = r.achieved_fe;
    j["bound_fe"] = r.bound_fe;
    j["uhlmann_overlap"] = r.uhlmann_overlap;
    j["truncated_weight"] = r.truncated_weight;
    j["vacuous"] = r.vacuous;
    doc["rows"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

void write_report(const std::vector<SweepRow>& rows, const SweepConfig& cfg) {
  const std::string text = format_report(rows, cfg.format);
  if (cfg.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output " + cfg.output_path);
  out << text;
  if (!out) throw std::runtime_error("failed writing output " + cfg.output_path);
}

std::size_t InequalitySummary::total_violations() const {
  return pinsker_violations + classical_pinsker_violations + measurement_bound_violations +
         fuchs_violations + chain_violations + relent_monotonicity_violations +
         trace_monotonicity_violations + fidelity_monotonicity_violations;
}

namespace {

ordered_json summary_json(const InequalitySummary& s) {
  auto num = [](double v) -> ordered_json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  ordered_json j;
  j["trials"] = s.trials;
  j["finite_relent"] = s.finite_relent;
  j["pinsker_violations"] = s.pinsker_violations;
  j["classical_pinsker_violations"] = s.classical_pinsker_violations;
  j["measurement_bound_violations"] = s.measurement_bound_violations;
  j["fuchs_violations"] = s.fuchs_violations;
  j["chain_violations"] = s.chain_violations;
  j["relent_monotonicity_violations"] = s.relent_monotonicity_violations;
  j["trace_monotonicity_violations"] = s.trace_monotonicity_violations;
  j["fidelity_monotonicity_violations"] = s.fidelity_monotonicity_violations;
  j["total_violations"] = s.total_violations();
  j["min_pinsker_margin"] = num(s.min_pinsker_margin);
  j["min_classical_pinsker_margin"] = num(s.min_classical_pinsker_margin);
  j["min_measurement_margin"] = num(s.min_measurement_margin);
  j["min_fuchs_margin"] = num(s.min_fuchs_margin);
  j["min_chain_margin"] = num(s.min_chain_margin);
  j["max_relent_increase"] = num(s.max_relent_increase);
  j["max_trace_dist_increase"] = num(s.max_trace_dist_increase);
  j["max_fidelity_decrease"] = num(s.max_fidelity_decrease);
  return j;
}

}  // namespace

std::string InequalitySummary::to_json() const { return summary_json(*this).dump(2) + "\n"; }

std::string InequalitySummary::to_text() const {
  std::string out;
  const ordered_json doc = summary_json(*this);
  for (const auto& [key, value] : doc.items()) {
    out += key;
    out.append(key.size() < 32 ? 32 - key.size() : 1, ' ');
    out += value.is_string() ? value.get<std::string>() : value.dump();
    out += '\n';
  }
  return out;
}

InequalitySummary verify_inequalities(const VerifyConfig& cfg) {
  if (cfg.trials == 0) throw std::invalid_argument("verify: trials must be >= 1");
  if (cfg.max_dim < 2 || cfg.max_dim > 16) throw std::invalid_argument("verify: max_dim must be in [2, 16]");

  InequalitySummary s;
  s.trials = cfg.trials;
  const double tol = cfg.inequality_tol;
  const double pinsker_c = 1.0 / (2.0 * std::numbers::ln2);

  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Rng rng(stream_seed(cfg.seed, 0, t));
    const std::size_t d = rng.uniform_int(2, cfg.max_dim);
    const ComplexMatrix rho = random_density(d, rng.uniform_int(1, d), rng);
    ComplexMatrix sigma = rho;
    if (!cfg.force_equal) {
      // Mix of full-rank, rank-deficient and nearly equal partners.
      const double kind = rng.uniform();
      if (kind < 0.5) {
        sigma = random_density(d, d, rng);
      } else if (kind < 0.75) {
        sigma = random_density(d, rng.uniform_int(1, d), rng);
      } else {
        const double mix = std::pow(10.0, -6.0 * rng.uniform());
        sigma = rho * (1.0 - mix) + random_density(d, d, rng) * mix;
      }
    }

    const DistanceReport rep = distance_report(rho, sigma);
    const bool finite = !std::isinf(rep.relent);
    if (finite) ++s.finite_relent;

    const double pinsker = rep.pinsker_margin();
    s.min_pinsker_margin = std::min(s.min_pinsker_margin, pinsker);
    if (pinsker < -tol) ++s.pinsker_violations;

    const double fuchs = rep.fuchs_margin();
    s.min_fuchs_margin = std::min(s.min_fuchs_margin, fuchs);
    if (fuchs < -tol) ++s.fuchs_violations;

    const double chain = std::min(rep.tight_chain_margin(), rep.chain_margin());
    s.min_chain_margin = std::min(s.min_chain_margin, chain);
    if (chain < -tol) ++s.chain_violations;

    const HelstromSplit split = helstrom_split(rho, sigma);
    const double classical = classical_relative_entropy(split.p, split.q);
    const double l1 = split.l1_distance();
    const double cp = std::isinf(classical) ? kInfinity : classical - pinsker_c * l1 * l1;
    s.min_classical_pinsker_margin = std::min(s.min_classical_pinsker_margin, cp);
    if (cp < -tol) ++s.classical_pinsker_violations;

    if (finite) {
      // Helstrom measurement and a random projective measurement.
      const ComplexMatrix basis = random_unitary(d, rng);
      const double random_classical =
          classical_relative_entropy(measurement_distribution(rho, basis), measurement_distribution(sigma, basis));
      const double margin = rep.relent - std::max(classical, random_classical);
      s.min_measurement_margin = std::min(s.min_measurement_margin, margin);
      if (margin < -tol) ++s.measurement_bound_violations;
    }

    const QuantumChannel ch = random_channel(d, rng.uniform_int(1, 4), rng);
    const MonotonicityReport mono = monotonicity_check(ch, rho, sigma);
    s.max_relent_increase = std::max(s.max_relent_increase, mono.relent_increase);
    s.max_trace_dist_increase = std::max(s.max_trace_dist_increase, mono.trace_dist_increase);
    s.max_fidelity_decrease = std::max(s.max_fidelity_decrease, mono.fidelity_decrease);
    if (mono.relent_increase > cfg.monotonicity_slack) ++s.relent_monotonicity_violations;
    if (mono.trace_dist_increase > cfg.monotonicity_slack) ++s.trace_monotonicity_violations;
    if (mono.fidelity_decrease > cfg.monotonicity_slack) ++s.fidelity_monotonicity_violations;
  }
  return s;
}

DemoResult demo(const std::string& channel_spec, const std::string& input_spec) {
  const LabeledState input = parse_input_spec(input_spec);
  const QuantumChannel ch = channel_from_spec(channel_spec);
  CorrectionOutcome out = correct(input, ch);

  const LabeledState final_state = evolve_tripartite(input, dilate(ch));
  const ComplexMatrix rho_re = partial_trace(final_state, {"R", "E"}).density();
  const ComplexMatrix product =
      kron(partial_trace(final_state, {"R"}).density(), partial_trace(final_state, {"E"}).density());
  const DistanceReport dist = distance_report(rho_re, product);

  std::ostringstream text;
  auto line = [&](const std::string& key, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "  %-18s %.12g\n", key.c_str(), v);
    text << buf;
  };
  text << "channel: " << channel_spec << "\ninput:   " << input_spec << "\n\n";
  text << "loss report (bits)\n";
  for (const auto& [k, v] : out.loss.fields()) line(k, v);
  text << "\ndistance of rho^RE' to rho^R' (x) rho^E'\n";
  for (const auto& [k, v] : dist.fields()) line(k, v);
  text << "\ncorrection outcome\n";
  for (const auto& [k, v] : out.fields()) line(k, v);
  line("ancilla_dim", static_cast<double>(out.ancilla_dim));

  const bool asserted = !out.vacuous() && out.truncated_weight <= 1e-12;
  const bool violation =
      asserted && (out.margin_f() < -kBoundSlack || out.margin_fe() < -kBoundSlack);
  char buf[200];
  if (out.vacuous()) {
    std::snprintf(buf, sizeof buf, "\nbound: vacuous (eps = %.6g >= 1, 1 - sqrt(eps) = %.6g); achieved F = %.9f\n",
                  out.epsilon, out.bound_f, out.achieved_f);
  } else {
    std::snprintf(buf, sizeof buf, "\nbound: F = %.9f %s 1 - sqrt(eps) = %.9f (margin %.3g)\n", out.achieved_f,
                  out.margin_f() >= -kBoundSlack ? ">=" : "<", out.bound_f, out.margin_f());
  }
  text << buf;
  return {text.str(), std::move(out), dist, violation};
}

}  // namespace qrecover
