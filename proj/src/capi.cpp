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

#include "zenolab/zenolab.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "zenolab/composite.hpp"
#include "zenolab/crn.hpp"
#include "zenolab/error.hpp"
#include "zenolab/rng.hpp"
#include "zenolab/scalecalc.hpp"
#include "zenolab/validate.hpp"
#include "zenolab/zeno.hpp"

struct zl_zeno_system {
  zenolab::ZenoSystem system;
};

struct zl_report {
  zenolab::ValidationReport report;
};

namespace {

using zenolab::ComplexMatrix;
using zenolab::ErrorCode;

thread_local std::string g_last_error;

zl_status ToStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return ZL_INVALID_ARGUMENT;
    case ErrorCode::kDimensionMismatch: return ZL_DIMENSION_MISMATCH;
    case ErrorCode::kModelViolation: return ZL_MODEL_VIOLATION;
    case ErrorCode::kNumerical: return ZL_NUMERICAL;
    case ErrorCode::kInsufficientData: return ZL_INSUFFICIENT_DATA;
  }
  return ZL_INTERNAL;
}

template <typename Fn>
zl_status Guard(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return ZL_OK;
  } catch (const zenolab::Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ZL_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ZL_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return ZL_INTERNAL;
  }
}

void NotNull(const void* p, const char* what) {
  if (p == nullptr) zenolab::Fail(ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

ComplexMatrix ReadMatrix(const double* data, int64_t dim) {
  ComplexMatrix m(dim, dim);
  for (int64_t i = 0; i < dim; ++i)
    for (int64_t j = 0; j < dim; ++j) m(i, j) = {data[2 * (i * dim + j)], data[2 * (i * dim + j) + 1]};
  return m;
}

zenolab::ThermalNoiseModel ToModel(const zl_noise_model& in) {
  zenolab::ThermalNoiseModel m;
  m.m = in.m;
  m.n = in.n;
  m.g = in.g;
  m.temperature = in.temperature;
  m.epsilon = in.epsilon;
  m.tau_c = in.tau_c;
  return m;
}

zenolab::ZenoRunConfig ToRunConfig(const zl_zeno_system* system, const zl_zeno_run_params* params) {
  NotNull(system, "system");
  NotNull(params, "params");
  zenolab::ZenoRunConfig cfg{.system = system->system};
  cfg.dt_meas = params->dt_meas;
  cfg.dt_int = params->dt_int;
  cfg.n_cycles = params->n_cycles;
  cfg.seed = params->seed;
  cfg.initial_projector = params->initial_projector;
  return cfg;
}

zl_zeno_run_result FromRunResult(const zenolab::ZenoRunResult& r) {
  zl_zeno_run_result out{};
  out.delta_p_hat = r.delta_p_hat.value;
  out.delta_p_hat_stderr = r.delta_p_hat.std_error;
  out.delta_p_mean = r.delta_p_mean.value;
  out.delta_p_mean_stderr = r.delta_p_mean.std_error;
  out.sigma_dot = r.sigma_dot_hat.value;
  out.sigma_dot_stderr = r.sigma_dot_hat.std_error;
  out.error_count = r.error_count;
  out.null_escapes = r.null_escapes;
  out.cycles = r.cycles;
  out.total_time = r.total_time;
  out.total_entropy = r.total_entropy;
  out.final_projector = r.final_projector;
  return out;
}

void WriteAllocation(const zenolab::AllocationResult& a, double* rates, double* sigmas, zl_allocation* out) {
  for (std::size_t i = 0; i < a.rates.size(); ++i) {
    rates[i] = a.rates[i];
    if (sigmas != nullptr) sigmas[i] = a.sigmas[i];
  }
  *out = {a.lambda, a.total_rate, a.total_sigma, a.eta_bar};
}

zenolab::CrnResult ToCrnResult(const zl_crn_result& in) {
  zenolab::CrnResult r;
  r.nu_c_hat = {in.nu_c_hat, in.nu_c_stderr};
  r.sigma_dot_event = {in.sigma_dot_event, in.sigma_dot_event_stderr};
  r.sigma_dot_analytic = in.sigma_dot_analytic;
  r.gamma = in.gamma;
  r.n_bias = in.n_bias;
  r.beta_initial = in.beta_initial;
  r.beta_mean = in.beta_mean;
  r.events = in.events;
  r.forward_events = in.forward_events;
  r.backward_events = in.backward_events;
  r.net_steps = in.net_steps;
  r.mean_wait = {in.mean_wait, in.mean_wait_stderr};
  r.expected_wait = in.expected_wait;
  r.bias_conserved = in.bias_conserved != 0;
  r.chemostat = in.chemostat != 0;
  return r;
}

zenolab::GeometryParams ToGeometry(const zl_geometry* g) {
  NotNull(g, "geometry");
  zenolab::GeometryParams p;
  p.r = g->r;
  p.area_coeff = g->area_coeff;
  p.vol_coeff = g->vol_coeff;
  p.area_exp = g->area_exp;
  p.vol_exp = g->vol_exp;
  return p;
}

}  // namespace

extern "C" {

const char* zl_status_name(zl_status status) {
  switch (status) {
    case ZL_OK: return "ok";
    case ZL_INVALID_ARGUMENT: return "invalid_argument";
    case ZL_DIMENSION_MISMATCH: return "dimension_mismatch";
    case ZL_MODEL_VIOLATION: return "model_violation";
    case ZL_NUMERICAL: return "numerical";
    case ZL_INSUFFICIENT_DATA: return "insufficient_data";
    case ZL_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* zl_last_error(void) { return g_last_error.c_str(); }

const char* zl_version(void) { return "0.1.0"; }

uint64_t zl_mix_seed(uint64_t master, uint64_t index) { return zenolab::MixSeed(master, index); }

void zl_noise_model_default(zl_noise_model* model) {
  if (model == nullptr) return;
  *model = {1, 1, 2.0, 0.0, 1.0, 1.0};
}

zl_status zl_eta(const zl_noise_model* model, double* out) {
  return Guard([&] {
    NotNull(model, "model");
    NotNull(out, "out");
    *out = zenolab::Eta(ToModel(*model));
  });
}

zl_status zl_zeno_bound_sigma(double nu_c, double nu_z, double eta, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = zenolab::ZenoBoundSigma(nu_c, nu_z, eta);
  });
}

zl_status zl_margolus_levitin(zl_rate_kind kind, const zl_noise_model* model, double energy_total, double* out) {
  return Guard([&] {
    NotNull(model, "model");
    NotNull(out, "out");
    const auto k = kind == ZL_RATE_MEASUREMENT ? zenolab::RateKind::kMeasurement : zenolab::RateKind::kComputation;
    *out = zenolab::MargolusLevitin(k, ToModel(*model), energy_total);
  });
}

zl_status zl_dissipation_delay(double eta, double energy_total, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = zenolab::DissipationDelay(eta, energy_total);
  });
}

zl_status zl_entropy_step(double delta_p, double num_states, zl_entropy_mode mode, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    const auto m = mode == ZL_ENTROPY_EXACT ? zenolab::EntropyMode::kExact : zenolab::EntropyMode::kFirstOrder;
    *out = zenolab::EntropyStep(delta_p, num_states, m);
  });
}

void zl_block_params_default(zl_block_params* params) {
  if (params == nullptr) return;
  params->dim = 8;
  params->num_valid = 4;
  params->valid_rank = 2;
  zl_noise_model_default(&params->model);
  params->jump = ZL_JUMP_NONE;
  params->gamma = 0.0;
  params->structure_seed = 1;
}

zl_status zl_zeno_system_create_block(const zl_block_params* params, zl_zeno_system** out) {
  return Guard([&] {
    NotNull(params, "params");
    NotNull(out, "out");
    *out = nullptr;
    zenolab::BlockSystemParams bp;
    bp.dim = params->dim;
    bp.num_valid = params->num_valid;
    bp.valid_rank = params->valid_rank;
    bp.model = ToModel(params->model);
    bp.jump = params->jump == ZL_JUMP_CYCLIC_SHIFT ? zenolab::JumpKind::kCyclicShift : zenolab::JumpKind::kNone;
    bp.gamma = params->gamma;
    bp.structure_seed = params->structure_seed;
    *out = new zl_zeno_system{zenolab::MakeBlockSystem(bp)};
  });
}

zl_status zl_zeno_system_create(int64_t dim, const double* h0, size_t num_projectors, const double* projectors,
                                size_t num_jumps, const double* gammas, const double* jumps,
                                const zl_noise_model* model, zl_zeno_system** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = nullptr;
    NotNull(h0, "h0");
    NotNull(projectors, "projectors");
    NotNull(model, "model");
    zenolab::Require(dim >= 1, ErrorCode::kInvalidArgument, "dim must be >= 1");
    zenolab::Require(num_projectors >= 2, ErrorCode::kInvalidArgument, "need at least 2 computational projectors");
    if (num_jumps > 0) {
      NotNull(gammas, "gammas");
      NotNull(jumps, "jumps");
    }
    const std::size_t stride = 2 * static_cast<std::size_t>(dim * dim);
    std::vector<zenolab::Projector> ps;
    for (std::size_t k = 0; k < num_projectors; ++k) ps.emplace_back(ReadMatrix(projectors + k * stride, dim));
    std::vector<zenolab::JumpTerm> terms;
    for (std::size_t k = 0; k < num_jumps; ++k) terms.push_back({gammas[k], ReadMatrix(jumps + k * stride, dim)});
    const zenolab::ThermalNoiseModel m = ToModel(*model);
    m.Validate();
    const ComplexMatrix h = ReadMatrix(h0, dim);
    zenolab::Require(zenolab::IsHermitian(h), ErrorCode::kModelViolation, "h0 is not Hermitian");
    zenolab::ZenoSystem sys{m, zenolab::ProjectorPartition::FromComputational(std::move(ps)), h,
                            zenolab::LindbladChannel(std::move(terms))};
    *out = new zl_zeno_system{std::move(sys)};
  });
}

void zl_zeno_system_destroy(zl_zeno_system* system) { delete system; }

zl_status zl_zeno_system_dim(const zl_zeno_system* system, int64_t* out) {
  return Guard([&] {
    NotNull(system, "system");
    NotNull(out, "out");
    *out = system->system.h0.rows();
  });
}

zl_status zl_zeno_system_scale(const zl_zeno_system* system, double* out) {
  return Guard([&] {
    NotNull(system, "system");
    NotNull(out, "out");
    *out = zenolab::HamiltonianScale(system->system);
  });
}

zl_status zl_zeno_system_operation_rate(const zl_zeno_system* system, double* out) {
  return Guard([&] {
    NotNull(system, "system");
    NotNull(out, "out");
    *out = zenolab::OperationRate(system->system);
  });
}

zl_status zl_zeno_system_eta(const zl_zeno_system* system, double* out) {
  return Guard([&] {
    NotNull(system, "system");
    NotNull(out, "out");
    *out = zenolab::Eta(system->system.model);
  });
}

zl_status zl_zeno_system_set_tau_c(zl_zeno_system* system, double tau_c) {
  return Guard([&] {
    NotNull(system, "system");
    zenolab::ThermalNoiseModel m = system->system.model;
    m.tau_c = tau_c;
    m.Validate();
    system->system.model = m;
  });
}

zl_status zl_zeno_run(const zl_zeno_system* system, const zl_zeno_run_params* params, zl_zeno_run_result* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = FromRunResult(zenolab::RunZeno(ToRunConfig(system, params)));
  });
}

zl_status zl_regime_scan(const zl_zeno_system* system, const zl_zeno_run_params* params, const double* dt_grid,
                         size_t num_points, unsigned threads, zl_regime_scan_result* out,
                         zl_zeno_run_result* per_point) {
  return Guard([&] {
    NotNull(out, "out");
    NotNull(dt_grid, "dt_grid");
    const zenolab::RegimeScanResult r =
        zenolab::RegimeScan(ToRunConfig(system, params), std::span<const double>(dt_grid, num_points), threads);
    *out = {r.exponent, r.exponent_stderr, r.regime == zenolab::Regime::kZeno ? ZL_REGIME_ZENO : ZL_REGIME_STRONG};
    if (per_point != nullptr)
      for (std::size_t i = 0; i < r.per_dt.size(); ++i) per_point[i] = FromRunResult(r.per_dt[i]);
  });
}

zl_status zl_allocate_zeno(size_t n, const double* nu_z, const double* eta, double sigma_budget, double* rates,
                           double* sigmas, zl_allocation* out) {
  return Guard([&] {
    NotNull(nu_z, "nu_z");
    NotNull(eta, "eta");
    NotNull(rates, "rates");
    NotNull(out, "out");
    std::vector<zenolab::SubsystemProfile> prof;
    for (std::size_t i = 0; i < n; ++i) prof.push_back({nu_z[i], eta[i]});
    WriteAllocation(zenolab::AllocateZeno(prof, sigma_budget), rates, sigmas, out);
  });
}

zl_status zl_allocate_strong(size_t n, const double* eta, double sigma_budget, double* rates, double* sigmas,
                             zl_allocation* out) {
  return Guard([&] {
    NotNull(eta, "eta");
    NotNull(rates, "rates");
    NotNull(out, "out");
    WriteAllocation(zenolab::AllocateStrong(std::span<const double>(eta, n), sigma_budget), rates, sigmas, out);
  });
}

zl_status zl_subsystem_sigma(zl_cost_model model, double nu_z, double eta, double rate, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    const auto m = model == ZL_COST_STRONG ? zenolab::CostModel::kStrong : zenolab::CostModel::kZeno;
    *out = zenolab::SubsystemSigma(m, {model == ZL_COST_STRONG ? 1.0 : nu_z, eta}, rate);
  });
}

zl_status zl_verify_marginal_cost(zl_cost_model model, size_t n, const double* nu_z, const double* eta,
                                  const double* rates, double lambda, double rel_tol, int* ok) {
  return Guard([&] {
    NotNull(eta, "eta");
    NotNull(rates, "rates");
    NotNull(ok, "ok");
    if (model == ZL_COST_ZENO) NotNull(nu_z, "nu_z");
    zenolab::AllocationResult a;
    a.model = model == ZL_COST_STRONG ? zenolab::CostModel::kStrong : zenolab::CostModel::kZeno;
    a.lambda = lambda;
    for (std::size_t i = 0; i < n; ++i) {
      const zenolab::SubsystemProfile p{model == ZL_COST_STRONG ? 1.0 : nu_z[i], eta[i]};
      a.profiles.push_back(p);
      a.rates.push_back(rates[i]);
      a.sigmas.push_back(zenolab::SubsystemSigma(a.model, p, rates[i]));
      a.total_rate += rates[i];
      a.total_sigma += a.sigmas.back();
    }
    *ok = zenolab::VerifyEqualMarginalCost(a, rel_tol) ? 1 : 0;
  });
}

void zl_crn_config_default(zl_crn_config* config) {
  if (config == nullptr) return;
  *config = {0, 0, 1, 1.0, 1.0, 1, 0, 0};
}

zl_status zl_crn_run(const zl_crn_config* config, zl_crn_result* out, double* trace_t, double* trace_beta,
                     size_t* trace_len) {
  return Guard([&] {
    NotNull(config, "config");
    NotNull(out, "out");
    zenolab::CrnConfig c;
    c.n_plus = config->n_plus;
    c.n_minus = config->n_minus;
    c.n_tokens = config->n_tokens;
    c.k = config->k;
    c.t_final = config->t_final;
    c.chemostat = config->chemostat != 0;
    c.seed = config->seed;
    c.trace_points = config->trace_points;
    const bool want_trace = trace_t != nullptr || trace_beta != nullptr;
    if (!want_trace) c.trace_points = 0;
    const zenolab::CrnResult r = zenolab::RunGillespie(c);
    *out = {r.nu_c_hat.value, r.nu_c_hat.std_error, r.sigma_dot_event.value, r.sigma_dot_event.std_error,
            r.sigma_dot_analytic, r.gamma, r.n_bias, r.beta_initial, r.beta_mean, r.events, r.forward_events,
            r.backward_events, r.net_steps, r.mean_wait.value, r.mean_wait.std_error, r.expected_wait,
            r.bias_conserved ? 1 : 0, r.chemostat ? 1 : 0};
    for (std::size_t i = 0; want_trace && i < r.beta_trace.size(); ++i) {
      if (trace_t != nullptr) trace_t[i] = r.beta_trace[i].first;
      if (trace_beta != nullptr) trace_beta[i] = r.beta_trace[i].second;
    }
    if (trace_len != nullptr) *trace_len = want_trace ? r.beta_trace.size() : 0;
  });
}

zl_status zl_ctmc_entropy_rate(const double* flows, size_t num_states, double* out) {
  return Guard([&] {
    NotNull(flows, "flows");
    NotNull(out, "out");
    *out = zenolab::CtmcEntropyRate(std::span<const double>(flows, num_states * num_states), num_states);
  });
}

zl_status zl_analytic_bias_entropy_rate(double gamma, double beta, double n_bias, zl_entropy_convention convention,
                                        double* out) {
  return Guard([&] {
    NotNull(out, "out");
    const auto c = convention == ZL_CONVENTION_EVENT_LOG ? zenolab::EntropyConvention::kEventLog
                                                          : zenolab::EntropyConvention::kClosedForm;
    *out = zenolab::AnalyticBiasEntropyRate(gamma, beta, n_bias, c);
  });
}

zl_status zl_adiabatic_fit_results(const zl_crn_result* results, size_t n, double gamma, double n_bias,
                                   zl_adiabatic_fit* out) {
  return Guard([&] {
    NotNull(results, "results");
    NotNull(out, "out");
    std::vector<zenolab::CrnResult> rs;
    for (std::size_t i = 0; i < n; ++i) rs.push_back(ToCrnResult(results[i]));
    const zenolab::AdiabaticFit f = zenolab::VerifyAdiabaticLaw(rs, gamma, n_bias);
    *out = {f.sigma_vs_beta.exponent, f.sigma_vs_beta.exponent_stderr, f.nu_vs_beta.exponent,
            f.nu_vs_beta.exponent_stderr, f.law_constant_mean, f.law_constant_spread};
  });
}

const char* zl_crn_convention_note(void) { return zenolab::CrnConventionNote(); }

void zl_geometry_default(zl_geometry* geometry) {
  if (geometry == nullptr) return;
  *geometry = {1.0, 1.0, 1.0, 2.0, 3.0};
}

zl_status zl_geometric_rates(const zl_geometry* geometry, double* nu_net, double* nu_single) {
  return Guard([&] {
    const zenolab::GeometricRates r = zenolab::ComputeGeometricRates(ToGeometry(geometry));
    if (nu_net != nullptr) *nu_net = r.nu_net;
    if (nu_single != nullptr) *nu_single = r.nu_single;
  });
}

zl_status zl_irreversible_rate(double delta_i, double sigma_dot, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = zenolab::IrreversibleRate({delta_i, sigma_dot});
  });
}

zl_status zl_advantage_ratio(const zl_geometry* geometry, double delta_i, double sigma_per_area, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = zenolab::AdvantageRatio(ToGeometry(geometry), delta_i, sigma_per_area);
  });
}

zl_status zl_crossover_radius(const zl_geometry* geometry, double delta_i, double sigma_per_area, double r_lo,
                              double r_hi, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = zenolab::CrossoverRadius(ToGeometry(geometry), delta_i, sigma_per_area, r_lo, r_hi);
  });
}

zl_status zl_validate(uint64_t seed, int inject_trace_fault, zl_report** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = nullptr;
    zenolab::ValidateOptions opts;
    opts.seed = seed;
    opts.inject_trace_fault = inject_trace_fault != 0;
    *out = new zl_report{zenolab::Validate(opts)};
  });
}

size_t zl_report_size(const zl_report* report) { return report == nullptr ? 0 : report->report.checks.size(); }

zl_status zl_report_item(const zl_report* report, size_t index, zl_check* out) {
  return Guard([&] {
    NotNull(report, "report");
    NotNull(out, "out");
    zenolab::Require(index < report->report.checks.size(), ErrorCode::kInvalidArgument, "report index out of range");
    const zenolab::InvariantCheck& c = report->report.checks[index];
    *out = {c.name.c_str(), c.detail.c_str(), c.passed ? 1 : 0, c.measured, c.threshold};
  });
}

int zl_report_all_passed(const zl_report* report) { return report != nullptr && report->report.all_passed() ? 1 : 0; }

const char* zl_report_notes(const zl_report* report) { return report == nullptr ? "" : report->report.notes.c_str(); }

void zl_report_destroy(zl_report* report) { delete report; }

}  // extern "C"
