// Copyright 2026 The Zenolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// zenolab command-line experiment harness. Talks to the library only
// through the C interface in zenolab/zenolab.h.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zenolab/zenolab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Stops the run with a given exit code and message.
struct ExitError : std::runtime_error {
  ExitError(int code, const std::string& msg) : std::runtime_error(msg), exit_code(code) {}
  int exit_code;
};

[[noreturn]] void Usage(const std::string& msg) { throw ExitError(kExitUsage, msg); }

void Check(zl_status s, const char* what) {
  if (s == ZL_OK) return;
  const std::string msg = std::string(what) + ": " + zl_status_name(s) + ": " + zl_last_error();
  throw ExitError(s == ZL_INVALID_ARGUMENT ? kExitUsage : kExitRuntime, msg);
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- Parameters ----

enum class Kind { kInt, kDouble, kChoice, kDoubleList, kString };

struct ParamSpec {
  std::string name;
  Kind kind;
  std::string default_value;
  std::vector<std::string> choices = {};
};

class Params {
 public:
  Params(std::vector<ParamSpec> specs) : specs_(std::move(specs)) {
    for (const auto& s : specs_) values_[s.name] = s.default_value;
  }

  bool Known(const std::string& key) const { return values_.count(key) > 0; }

  void Set(const std::string& key, const std::string& value) {
    if (!Known(key)) Usage("unknown parameter '" + key + "'");
    values_[key] = value;
    user_set_.insert(key);
  }
  // Fills a key the user did not set.
  void SetDefault(const std::string& key, const std::string& value) {
    if (!user_set_.count(key)) values_[key] = value;
  }

  void Validate() const {
    for (const auto& s : specs_) {
      const std::string& v = values_.at(s.name);
      switch (s.kind) {
        case Kind::kInt: ParseInt(s.name, v); break;
        case Kind::kDouble: ParseDouble(s.name, v); break;
        case Kind::kDoubleList: ParseList(s.name, v); break;
        case Kind::kChoice:
          if (std::find(s.choices.begin(), s.choices.end(), v) == s.choices.end())
            Usage("parameter '" + s.name + "' has invalid value '" + v + "'");
          break;
        case Kind::kString: break;
      }
    }
  }

  std::int64_t Int(const std::string& key) const { return ParseInt(key, values_.at(key)); }
  double Double(const std::string& key) const { return ParseDouble(key, values_.at(key)); }
  std::vector<double> List(const std::string& key) const { return ParseList(key, values_.at(key)); }
  const std::string& Str(const std::string& key) const { return values_.at(key); }

  double Positive(const std::string& key) const {
    const double v = Double(key);
    if (!(v > 0.0)) Usage("parameter '" + key + "' must be > 0");
    return v;
  }
  double NonNegative(const std::string& key) const {
    const double v = Double(key);
    if (!(v >= 0.0)) Usage("parameter '" + key + "' must be >= 0");
    return v;
  }
  std::int64_t AtLeast(const std::string& key, std::int64_t lo) const {
    const std::int64_t v = Int(key);
    if (v < lo) Usage("parameter '" + key + "' must be >= " + std::to_string(lo));
    return v;
  }

  const std::vector<ParamSpec>& specs() const { return specs_; }

 private:
  static std::int64_t ParseInt(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    try {
      const long long x = std::stoll(v, &pos);
      if (pos == v.size()) return x;
    } catch (const std::exception&) {
    }
    Usage("parameter '" + key + "' expects an integer, got '" + v + "'");
  }
  static double ParseDouble(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    try {
      const double x = std::stod(v, &pos);
      if (pos == v.size() && std::isfinite(x)) return x;
    } catch (const std::exception&) {
    }
    Usage("parameter '" + key + "' expects a number, got '" + v + "'");
  }
  static std::vector<double> ParseList(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(ParseDouble(key, item));
    if (out.empty()) Usage("parameter '" + key + "' expects a comma-separated list");
    return out;
  }

  std::vector<ParamSpec> specs_;
  std::map<std::string, std::string> values_;
  std::set<std::string> user_set_;
};

// ---- Result tables ----

using Cell = std::variant<double, std::int64_t, std::string>;

struct Row {
  std::vector<std::pair<std::string, Cell>> cells;
  void Add(const std::string& name, Cell value) { cells.emplace_back(name, std::move(value)); }
};

struct ReplicaOutput {
  std::vector<Row> rows;  // one per point
  bool failed = false;    // validate: some invariant failed
};

struct CommandDef {
  std::string name;
  std::vector<ParamSpec> params;
  void (*resolve)(Params&) = nullptr;
  ReplicaOutput (*run)(const Params&, std::uint64_t seed) = nullptr;
  std::vector<std::string> (*notes)(const Params&, const std::vector<ReplicaOutput>&) = nullptr;
};

std::string CellText(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return FormatDouble(*d);
  if (const std::int64_t* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

nlohmann::ordered_json CellJson(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  if (const std::int64_t* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

std::vector<double> LogGrid(double lo, double hi, std::int64_t n) {
  std::vector<double> g;
  for (std::int64_t i = 0; i < n; ++i)
    g.push_back(n == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1)));
  return g;
}

// ---- Zeno commands ----

std::vector<ParamSpec> ZenoParams(const std::string& default_points) {
  return {
      {"preset", Kind::kChoice, "zeno", {"zeno", "strong"}},
      {"dim", Kind::kInt, "8"},
      {"num_valid", Kind::kInt, "4"},
      {"valid_rank", Kind::kInt, "2"},
      {"m", Kind::kInt, "2"},
      {"n", Kind::kInt, "1"},
      {"g", Kind::kDouble, "2"},
      {"temperature", Kind::kDouble, "1"},
      {"epsilon", Kind::kDouble, "1"},
      {"gamma", Kind::kDouble, "0"},
      {"structure_seed", Kind::kInt, "1"},
      {"dt_min", Kind::kDouble, "0.001"},  // in units of 1 / scale
      {"dt_max", Kind::kDouble, "0.1"},
      {"points", Kind::kInt, default_points},
      {"cycles", Kind::kInt, "100000"},
      {"substeps", Kind::kInt, "10"},
      {"tau_c", Kind::kDouble, "0.1"},  // in units of 1 / scale
  };
}

void ResolveZeno(Params& p) {
  if (p.Str("preset") == "strong") {
    p.SetDefault("temperature", "0");
    p.SetDefault("gamma", "1");
  }
  p.SetDefault("tau_c", p.Str("dt_max"));
}

struct ZenoSetup {
  zl_zeno_system* system = nullptr;
  double scale = 0.0;
  std::vector<double> dt_grid;
  std::int64_t substeps = 10;
  std::uint64_t cycles = 0;
  ZenoSetup() = default;
  ZenoSetup(const ZenoSetup&) = delete;
  ZenoSetup& operator=(const ZenoSetup&) = delete;
  ~ZenoSetup() { zl_zeno_system_destroy(system); }
};

void BuildZeno(const Params& p, ZenoSetup& s) {
  zl_block_params bp;
  zl_block_params_default(&bp);
  bp.dim = p.AtLeast("dim", 2);
  bp.num_valid = static_cast<int>(p.AtLeast("num_valid", 2));
  bp.valid_rank = p.AtLeast("valid_rank", 1);
  bp.model.m = static_cast<int>(p.AtLeast("m", 1));
  bp.model.n = static_cast<int>(p.AtLeast("n", 1));
  bp.model.g = p.Double("g");
  bp.model.temperature = p.NonNegative("temperature");
  bp.model.epsilon = p.Positive("epsilon");
  bp.jump = p.Str("preset") == "strong" ? ZL_JUMP_CYCLIC_SHIFT : ZL_JUMP_NONE;
  bp.gamma = p.NonNegative("gamma");
  bp.structure_seed = static_cast<std::uint64_t>(p.Int("structure_seed"));
  Check(zl_zeno_system_create_block(&bp, &s.system), "building Zeno system");
  Check(zl_zeno_system_scale(s.system, &s.scale), "system scale");
  Check(zl_zeno_system_set_tau_c(s.system, p.Positive("tau_c") / s.scale), "tau_c");
  const double lo = p.Positive("dt_min"), hi = p.Positive("dt_max");
  if (hi < lo) Usage("parameter 'dt_max' must be >= dt_min");
  for (double d : LogGrid(lo, hi, p.AtLeast("points", 1))) s.dt_grid.push_back(d / s.scale);
  s.substeps = p.AtLeast("substeps", 1);
  s.cycles = static_cast<std::uint64_t>(p.AtLeast("cycles", 1));
}

void AddRunCells(Row& row, const zl_zeno_run_result& r) {
  row.Add("delta_p_mean", r.delta_p_mean);
  row.Add("delta_p_mean_stderr", r.delta_p_mean_stderr);
  row.Add("delta_p_hat", r.delta_p_hat);
  row.Add("delta_p_hat_stderr", r.delta_p_hat_stderr);
  row.Add("sigma_dot", r.sigma_dot);
  row.Add("sigma_dot_stderr", r.sigma_dot_stderr);
  row.Add("error_count", static_cast<std::int64_t>(r.error_count));
  row.Add("null_escapes", static_cast<std::int64_t>(r.null_escapes));
}

ReplicaOutput RunRegimeScan(const Params& p, std::uint64_t seed) {
  ZenoSetup s;
  BuildZeno(p, s);
  if (s.dt_grid.size() < 5) Usage("parameter 'points' must be >= 5 for a regime scan");
  zl_zeno_run_params rp{s.dt_grid[0], s.dt_grid[0] / static_cast<double>(s.substeps), s.cycles, seed, 0};
  zl_regime_scan_result scan{};
  std::vector<zl_zeno_run_result> per(s.dt_grid.size());
  Check(zl_regime_scan(s.system, &rp, s.dt_grid.data(), s.dt_grid.size(), 1, &scan, per.data()), "regime scan");
  ReplicaOutput out;
  for (std::size_t i = 0; i < per.size(); ++i) {
    Row row;
    row.Add("dt_meas", s.dt_grid[i]);
    row.Add("dt_scaled", s.dt_grid[i] * s.scale);
    AddRunCells(row, per[i]);
    row.Add("exponent", scan.exponent);
    row.Add("exponent_stderr", scan.exponent_stderr);
    row.Add("regime", std::string(scan.regime == ZL_REGIME_ZENO ? "zeno" : "strong"));
    out.rows.push_back(std::move(row));
  }
  return out;
}

ReplicaOutput RunZenoSweep(const Params& p, std::uint64_t seed) {
  ZenoSetup s;
  BuildZeno(p, s);
  double nu_c = 0.0, eta = 0.0;
  Check(zl_zeno_system_operation_rate(s.system, &nu_c), "operation rate");
  Check(zl_zeno_system_eta(s.system, &eta), "eta");
  ReplicaOutput out;
  for (std::size_t i = 0; i < s.dt_grid.size(); ++i) {
    const double dt = s.dt_grid[i];
    zl_zeno_run_params rp{dt, dt / static_cast<double>(s.substeps), s.cycles, zl_mix_seed(seed, i), 0};
    zl_zeno_run_result r{};
    Check(zl_zeno_run(s.system, &rp, &r), "Zeno run");
    double bound = 0.0;
    Check(zl_zeno_bound_sigma(nu_c, 1.0 / dt, eta, &bound), "bound");
    Row row;
    row.Add("dt_meas", dt);
    row.Add("dt_scaled", dt * s.scale);
    AddRunCells(row, r);
    row.Add("nu_c", nu_c);
    row.Add("nu_z", 1.0 / dt);
    row.Add("eta", eta);
    row.Add("sigma_bound", bound);
    row.Add("bound_ratio", bound > 0.0 ? r.sigma_dot / bound : std::nan(""));
    out.rows.push_back(std::move(row));
  }
  return out;
}

// ---- CRN ----

std::vector<ParamSpec> CrnParams() {
  return {
      {"n_bias", Kind::kInt, "1000"},
      {"beta", Kind::kDoubleList, "0.01,0.02,0.05,0.1"},
      {"n_tokens", Kind::kInt, "10"},
      {"k", Kind::kDouble, "0.1"},
      {"t_final", Kind::kDouble, "1000"},
      {"chemostat", Kind::kInt, "1"},
  };
}

ReplicaOutput RunCrn(const Params& p, std::uint64_t seed) {
  const std::int64_t n_bias = p.AtLeast("n_bias", 2);
  ReplicaOutput out;
  const std::vector<double> betas = p.List("beta");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] >= -1.0 && betas[i] <= 1.0)) Usage("parameter 'beta' entries must lie in [-1, 1]");
    zl_crn_config c;
    zl_crn_config_default(&c);
    c.n_plus = std::llround(0.5 * static_cast<double>(n_bias) * (1.0 + betas[i]));
    c.n_minus = n_bias - c.n_plus;
    c.n_tokens = p.AtLeast("n_tokens", 1);
    c.k = p.Positive("k");
    c.t_final = p.Positive("t_final");
    c.chemostat = p.Int("chemostat") != 0;
    c.seed = zl_mix_seed(seed, i);
    zl_crn_result r{};
    Check(zl_crn_run(&c, &r, nullptr, nullptr, nullptr), "CRN run");
    double closed = 0.0, event_log = 0.0;
    Check(zl_analytic_bias_entropy_rate(r.gamma, r.beta_initial, static_cast<double>(r.n_bias), ZL_CONVENTION_CLOSED_FORM,
                                        &closed), "analytic rate");
    Check(zl_analytic_bias_entropy_rate(r.gamma, r.beta_initial, static_cast<double>(r.n_bias),
                                        ZL_CONVENTION_EVENT_LOG, &event_log), "analytic rate");
    Row row;
    row.Add("beta", r.beta_initial);
    row.Add("n_plus", c.n_plus);
    row.Add("n_minus", c.n_minus);
    row.Add("nu_c_hat", r.nu_c_hat);
    row.Add("nu_c_stderr", r.nu_c_stderr);
    row.Add("sigma_dot_event", r.sigma_dot_event);
    row.Add("sigma_dot_event_stderr", r.sigma_dot_event_stderr);
    row.Add("sigma_dot_closed_form_convention", closed);
    row.Add("sigma_dot_event_log_convention", event_log);
    row.Add("beta_mean", r.beta_mean);
    row.Add("law_constant", r.sigma_dot_event > 0.0
                                ? r.nu_c_hat * r.nu_c_hat / (r.gamma * static_cast<double>(r.n_bias) * r.sigma_dot_event)
                                : std::nan(""));
    row.Add("events", static_cast<std::int64_t>(r.events));
    row.Add("net_steps", r.net_steps);
    row.Add("mean_wait", r.mean_wait);
    row.Add("expected_wait", r.expected_wait);
    row.Add("bias_conserved", static_cast<std::int64_t>(r.bias_conserved));
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<std::string> CrnNotes(const Params&, const std::vector<ReplicaOutput>&) {
  return {zl_crn_convention_note()};
}

// ---- Allocation ----

std::vector<ParamSpec> AllocateParams() {
  return {
      {"model", Kind::kChoice, "zeno", {"zeno", "strong"}},
      {"nu_z", Kind::kDoubleList, "1,2,4"},
      {"eta", Kind::kDoubleList, "1,1,1"},
      {"budget", Kind::kDouble, "1"},
  };
}

ReplicaOutput RunAllocate(const Params& p, std::uint64_t) {
  const std::vector<double> nu_z = p.List("nu_z");
  const std::vector<double> eta = p.List("eta");
  const bool strong = p.Str("model") == "strong";
  if (!strong && nu_z.size() != eta.size()) Usage("parameters 'nu_z' and 'eta' must have equal length");
  const double budget = p.Positive("budget");
  std::vector<double> rates(eta.size()), sigmas(eta.size());
  zl_allocation a{};
  if (strong) {
    Check(zl_allocate_strong(eta.size(), eta.data(), budget, rates.data(), sigmas.data(), &a), "allocation");
  } else {
    Check(zl_allocate_zeno(eta.size(), nu_z.data(), eta.data(), budget, rates.data(), sigmas.data(), &a), "allocation");
  }
  ReplicaOutput out;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    Row row;
    row.Add("subsystem", static_cast<std::int64_t>(i));
    row.Add("nu_z", strong ? std::nan("") : nu_z[i]);
    row.Add("eta", eta[i]);
    row.Add("rate", rates[i]);
    row.Add("sigma", sigmas[i]);
    row.Add("lambda", a.lambda);
    row.Add("total_rate", a.total_rate);
    row.Add("total_sigma", a.total_sigma);
    row.Add("eta_bar", a.eta_bar);
    out.rows.push_back(std::move(row));
  }
  return out;
}

// ---- Geometric scaling ----

std::vector<ParamSpec> ScalingParams() {
  return {
      {"r_min", Kind::kDouble, "1"},
      {"r_max", Kind::kDouble, "100"},
      {"points", Kind::kInt, "21"},
      {"area_coeff", Kind::kDouble, "1"},
      {"vol_coeff", Kind::kDouble, "1"},
      {"area_exp", Kind::kDouble, "2"},
      {"vol_exp", Kind::kDouble, "3"},
      {"delta_i", Kind::kDouble, FormatDouble(std::numbers::ln2)},
      {"sigma_per_area", Kind::kDouble, "1"},
  };
}

zl_geometry GeometryFrom(const Params& p, double r) {
  return {r, p.Positive("area_coeff"), p.Positive("vol_coeff"), p.Double("area_exp"), p.Double("vol_exp")};
}

ReplicaOutput RunScaling(const Params& p, std::uint64_t) {
  const double lo = p.Positive("r_min"), hi = p.Positive("r_max");
  if (hi < lo) Usage("parameter 'r_max' must be >= r_min");
  const double delta_i = p.Positive("delta_i"), spa = p.Positive("sigma_per_area");
  ReplicaOutput out;
  for (double r : LogGrid(lo, hi, p.AtLeast("points", 1))) {
    const zl_geometry g = GeometryFrom(p, r);
    double net = 0.0, single = 0.0, adv = 0.0;
    Check(zl_geometric_rates(&g, &net, &single), "geometric rates");
    Check(zl_advantage_ratio(&g, delta_i, spa, &adv), "advantage ratio");
    Row row;
    row.Add("r", r);
    row.Add("nu_net", net);
    row.Add("nu_single", single);
    row.Add("nu_irreversible", spa * g.area_coeff * std::pow(r, g.area_exp) / delta_i);
    row.Add("advantage_ratio", adv);
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<std::string> ScalingNotes(const Params& p, const std::vector<ReplicaOutput>&) {
  const zl_geometry g = GeometryFrom(p, 1.0);
  double r = 0.0;
  if (zl_crossover_radius(&g, p.Double("delta_i"), p.Double("sigma_per_area"), 1e-12, 1e12, &r) == ZL_OK)
    return {"crossover_radius=" + FormatDouble(r)};
  return {"crossover_radius not bracketed in [1e-12, 1e12]"};
}

// ---- Validation ----

std::vector<ParamSpec> ValidateParams() { return {{"inject_fault", Kind::kInt, "0"}}; }

ReplicaOutput RunValidate(const Params& p, std::uint64_t seed) {
  zl_report* report = nullptr;
  Check(zl_validate(seed, p.Int("inject_fault") != 0, &report), "validate");
  ReplicaOutput out;
  for (std::size_t i = 0; i < zl_report_size(report); ++i) {
    zl_check c{};
    zl_report_item(report, i, &c);
    Row row;
    row.Add("invariant", std::string(c.name));
    row.Add("passed", static_cast<std::int64_t>(c.passed));
    row.Add("measured", c.measured);
    row.Add("threshold", c.threshold);
    row.Add("detail", std::string(c.detail));
    out.rows.push_back(std::move(row));
  }
  out.failed = !zl_report_all_passed(report);
  zl_report_destroy(report);
  return out;
}

std::vector<std::string> ValidateNotes(const Params&, const std::vector<ReplicaOutput>& reps) {
  std::vector<std::string> notes{zl_crn_convention_note()};
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (const Row& row : reps[i].rows) {
      if (std::get<std::int64_t>(row.cells[1].second) == 0)
        notes.push_back("replica " + std::to_string(i) + ": FAILED " + std::get<std::string>(row.cells[0].second));
    }
  }
  return notes;
}

const std::vector<CommandDef>& Commands() {
  static const std::vector<CommandDef> commands = {
      {"regime-scan", ZenoParams("7"), ResolveZeno, RunRegimeScan, nullptr},
      {"zeno-sweep", ZenoParams("3"), ResolveZeno, RunZenoSweep, nullptr},
      {"crn", CrnParams(), nullptr, RunCrn, CrnNotes},
      {"allocate", AllocateParams(), nullptr, RunAllocate, nullptr},
      {"scaling", ScalingParams(), nullptr, RunScaling, ScalingNotes},
      {"validate", ValidateParams(), nullptr, RunValidate, ValidateNotes},
  };
  return commands;
}

// ---- Aggregation and output ----

struct AggregateRow {
  std::vector<std::pair<std::string, Cell>> mean;
  std::vector<std::pair<std::string, Cell>> stderr_cells;
};

std::vector<AggregateRow> Aggregate(const std::vector<ReplicaOutput>& reps) {
  std::vector<AggregateRow> out;
  const std::size_t n_rows = reps.front().rows.size();
  const double r = static_cast<double>(reps.size());
  for (std::size_t i = 0; i < n_rows; ++i) {
    AggregateRow agg;
    const Row& first = reps.front().rows[i];
    for (std::size_t c = 0; c < first.cells.size(); ++c) {
      const std::string& name = first.cells[c].first;
      if (std::holds_alternative<std::string>(first.cells[c].second)) {
        std::string v = std::get<std::string>(first.cells[c].second);
        for (const auto& rep : reps)
          if (std::get<std::string>(rep.rows[i].cells[c].second) != v) v = "mixed";
        agg.mean.emplace_back(name, v);
        agg.stderr_cells.emplace_back(name, std::string());
        continue;
      }
      double sum = 0.0;
      std::vector<double> xs;
      for (const auto& rep : reps) {
        const Cell& cell = rep.rows[i].cells[c].second;
        const double x = std::holds_alternative<double>(cell) ? std::get<double>(cell)
                                                              : static_cast<double>(std::get<std::int64_t>(cell));
        xs.push_back(x);
        sum += x;
      }
      const double mean = sum / r;
      double ss = 0.0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      const double se = reps.size() > 1 ? std::sqrt(ss / (r - 1.0) / r) : 0.0;
      agg.mean.emplace_back(name, mean);
      agg.stderr_cells.emplace_back(name, se);
    }
    out.push_back(std::move(agg));
  }
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

struct RunContext {
  const CommandDef* command = nullptr;
  std::uint64_t master_seed = 1;
  std::int64_t replicas = 1;
  std::string format = "csv";
};

void WriteCsv(std::ostream& os, const RunContext& ctx, const std::vector<std::uint64_t>& seeds,
              const std::vector<ReplicaOutput>& reps, const std::vector<AggregateRow>& agg,
              const std::vector<std::string>& notes, double wall) {
  os << "aggregate,replica,seed,point,stat";
  for (const auto& [name, cell] : reps.front().rows.front().cells) os << ',' << name;
  os << '\n';
  for (std::size_t r = 0; r < reps.size(); ++r) {
    for (std::size_t i = 0; i < reps[r].rows.size(); ++i) {
      os << "0," << r << ',' << seeds[r] << ',' << i << ",value";
      for (const auto& [name, cell] : reps[r].rows[i].cells) os << ',' << CsvField(CellText(cell));
      os << '\n';
    }
  }
  for (std::size_t i = 0; i < agg.size(); ++i) {
    os << "1,,," << i << ",mean";
    for (const auto& [name, cell] : agg[i].mean) os << ',' << CsvField(CellText(cell));
    os << "\n1,,," << i << ",stderr";
    for (const auto& [name, cell] : agg[i].stderr_cells) os << ',' << CsvField(CellText(cell));
    os << '\n';
  }
  for (const auto& note : notes) os << "# note: " << note << '\n';
  os << "# command=" << ctx.command->name << " master_seed=" << ctx.master_seed << " replicas=" << ctx.replicas
     << '\n';
  os << "# wall_seconds=" << FormatDouble(wall) << '\n';
}

void WriteJson(std::ostream& os, const RunContext& ctx, const Params& params, const std::vector<std::uint64_t>& seeds,
               const std::vector<ReplicaOutput>& reps, const std::vector<AggregateRow>& agg,
               const std::vector<std::string>& notes, double wall) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["command"] = ctx.command->name;
  ordered_json config;
  config["seed"] = ctx.master_seed;
  config["replicas"] = ctx.replicas;
  for (const auto& s : params.specs()) config[s.name] = params.Str(s.name);
  doc["config"] = config;
  ordered_json replicas = ordered_json::array();
  for (std::size_t r = 0; r < reps.size(); ++r) {
    ordered_json points = ordered_json::array();
    for (const Row& row : reps[r].rows) {
      ordered_json pt;
      for (const auto& [name, cell] : row.cells) pt[name] = CellJson(cell);
      points.push_back(pt);
    }
    replicas.push_back({{"replica", r}, {"seed", seeds[r]}, {"points", points}});
  }
  doc["replicas"] = replicas;
  ordered_json aggregate = ordered_json::array();
  for (const AggregateRow& a : agg) {
    ordered_json mean, se;
    for (const auto& [name, cell] : a.mean) mean[name] = CellJson(cell);
    for (const auto& [name, cell] : a.stderr_cells) se[name] = CellJson(cell);
    aggregate.push_back({{"mean", mean}, {"stderr", se}});
  }
  doc["aggregate"] = aggregate;
  doc["notes"] = notes;
  doc["timing"] = {{"wall_seconds", wall}};
  os << doc.dump(2) << '\n';
}

void LoadConfigFile(const std::string& path, Params& params, std::optional<std::uint64_t>& seed,
                    std::optional<std::int64_t>& replicas) {
  std::ifstream in(path);
  if (!in) Usage("cannot read config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) Usage(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "seed") {
        seed = std::stoull(value);
      } else if (key == "replicas") {
        replicas = std::stoll(value);
      } else {
        params.Set(key, value);
      }
    } catch (const std::logic_error&) {
      Usage(path + ":" + std::to_string(lineno) + ": invalid value for '" + key + "'");
    }
  }
}

int Run(int argc, char** argv) {
  CLI::App app{"zenolab experiment harness"};
  app.require_subcommand(1);
  std::string config_path, out_path = "-", format = "csv";
  std::optional<std::uint64_t> seed_flag;
  std::optional<std::int64_t> replicas_flag;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool dump_config = false;
  std::vector<std::string> overrides;

  std::map<CLI::App*, const CommandDef*> by_app;
  for (const CommandDef& cmd : Commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name);
    sub->add_option("--config", config_path, "flat key=value config file");
    sub->add_option("--seed", seed_flag, "master seed (default 1)");
    sub->add_option("--replicas", replicas_flag, "independent replicas (default 1)");
    sub->add_option("--out", out_path, "output file, - for stdout");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "worker threads for replicas")->check(CLI::PositiveNumber);
    sub->add_flag("--dump-config", dump_config, "print the resolved configuration and exit");
    sub->add_option("overrides", overrides, "key=value parameter overrides");
    std::string keys;
    for (const auto& s : cmd.params) keys += (keys.empty() ? "" : ", ") + s.name;
    sub->footer("Parameters: " + keys);
    by_app[sub] = &cmd;
  }
  if (argc > 1 && argv[1][0] != '-') {
    const std::string name = argv[1];
    const auto& cmds = Commands();
    if (std::none_of(cmds.begin(), cmds.end(), [&](const CommandDef& c) { return c.name == name; }))
      Usage("unknown command '" + name + "'");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunContext ctx;
  for (auto& [sub, cmd] : by_app)
    if (sub->parsed()) ctx.command = cmd;
  Params params(ctx.command->params);
  std::optional<std::uint64_t> seed_cfg;
  std::optional<std::int64_t> replicas_cfg;
  if (!config_path.empty()) LoadConfigFile(config_path, params, seed_cfg, replicas_cfg);
  for (const std::string& kv : overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) Usage("expected key=value, got '" + kv + "'");
    params.Set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (ctx.command->resolve != nullptr) ctx.command->resolve(params);
  params.Validate();
  ctx.master_seed = seed_flag.value_or(seed_cfg.value_or(1));
  ctx.replicas = replicas_flag.value_or(replicas_cfg.value_or(1));
  ctx.format = format;
  if (ctx.replicas < 1) Usage("replicas must be >= 1");

  if (dump_config) {
    std::cout << "# zenolab " << ctx.command->name << '\n';
    std::cout << "seed=" << ctx.master_seed << "\nreplicas=" << ctx.replicas << '\n';
    for (const auto& s : params.specs()) std::cout << s.name << '=' << params.Str(s.name) << '\n';
    return kExitOk;
  }

  std::ofstream file;
  if (out_path != "-") {
    file.open(out_path);
    if (!file) Usage("cannot write output file '" + out_path + "'");
  }
  std::ostream& os = out_path == "-" ? std::cout : file;

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::uint64_t> seeds(ctx.replicas);
  for (std::int64_t r = 0; r < ctx.replicas; ++r) seeds[r] = zl_mix_seed(ctx.master_seed, static_cast<std::uint64_t>(r));
  std::vector<ReplicaOutput> reps(ctx.replicas);
  std::vector<std::exception_ptr> errors(ctx.replicas);
  std::atomic<std::int64_t> next{0};
  const auto worker = [&] {
    for (std::int64_t r = next++; r < ctx.replicas; r = next++) {
      try {
        reps[r] = ctx.command->run(params, seeds[r]);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const unsigned n_threads = static_cast<unsigned>(std::min<std::int64_t>(threads, ctx.replicas));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (reps.front().rows.empty()) throw ExitError(kExitRuntime, "command produced no rows");
  const std::vector<AggregateRow> agg = Aggregate(reps);
  const std::vector<std::string> notes =
      ctx.command->notes != nullptr ? ctx.command->notes(params, reps) : std::vector<std::string>{};
  if (format == "json") {
    WriteJson(os, ctx, params, seeds, reps, agg, notes, wall);
  } else {
    WriteCsv(os, ctx, seeds, reps, agg, notes, wall);
  }
  os.flush();
  const bool failed = std::any_of(reps.begin(), reps.end(), [](const ReplicaOutput& r) { return r.failed; });
  if (failed) std::cerr << "zenolab: validation failed\n";
  return failed ? kExitRuntime : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const ExitError& e) {
    std::cerr << "zenolab: " << e.what() << '\n';
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "zenolab: " << e.what() << '\n';
    return kExitRuntime;
  }
}
