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

/* C interface to the zenolab library. All functions return a zl_status; on
 * failure zl_last_error() describes the problem (thread local, valid until
 * the next call on the same thread). Complex matrices are passed as
 * row-major arrays of interleaved (re, im) doubles, 2 * dim * dim entries. */
#ifndef ZENOLAB_ZENOLAB_H_
#define ZENOLAB_ZENOLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(ZENOLAB_BUILDING_LIBRARY)
#define ZL_API __attribute__((visibility("default")))
#else
#define ZL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zl_status {
  ZL_OK = 0,
  ZL_INVALID_ARGUMENT = 1,
  ZL_DIMENSION_MISMATCH = 2,
  ZL_MODEL_VIOLATION = 3,
  ZL_NUMERICAL = 4,
  ZL_INSUFFICIENT_DATA = 5,
  ZL_INTERNAL = 6
} zl_status;

ZL_API const char* zl_status_name(zl_status status);
ZL_API const char* zl_last_error(void);
ZL_API const char* zl_version(void);

/* Seed derivation used for every replica / grid point / stream. */
ZL_API uint64_t zl_mix_seed(uint64_t master, uint64_t index);

/* ---- Thermal noise model and closed forms ---- */

typedef struct zl_noise_model {
  int m;
  int n;
  double g;
  double temperature;
  double epsilon;
  double tau_c;
} zl_noise_model;

ZL_API void zl_noise_model_default(zl_noise_model* model);

ZL_API zl_status zl_eta(const zl_noise_model* model, double* out);
ZL_API zl_status zl_zeno_bound_sigma(double nu_c, double nu_z, double eta, double* out);

typedef enum zl_rate_kind { ZL_RATE_COMPUTATION = 0, ZL_RATE_MEASUREMENT = 1 } zl_rate_kind;
ZL_API zl_status zl_margolus_levitin(zl_rate_kind kind, const zl_noise_model* model, double energy_total,
                                     double* out);
ZL_API zl_status zl_dissipation_delay(double eta, double energy_total, double* out);

typedef enum zl_entropy_mode { ZL_ENTROPY_FIRST_ORDER = 0, ZL_ENTROPY_EXACT = 1 } zl_entropy_mode;
ZL_API zl_status zl_entropy_step(double delta_p, double num_states, zl_entropy_mode mode, double* out);

/* ---- Zeno systems ---- */

typedef struct zl_zeno_system zl_zeno_system;

typedef enum zl_jump_kind { ZL_JUMP_NONE = 0, ZL_JUMP_CYCLIC_SHIFT = 1 } zl_jump_kind;

typedef struct zl_block_params {
  int64_t dim;
  int num_valid;
  int64_t valid_rank;
  zl_noise_model model;
  zl_jump_kind jump;
  double gamma;
  uint64_t structure_seed;
} zl_block_params;

ZL_API void zl_block_params_default(zl_block_params* params);
ZL_API zl_status zl_zeno_system_create_block(const zl_block_params* params, zl_zeno_system** out);

/* projectors: num_projectors computational projectors, each a dim x dim
 * complex matrix; the non-computational projector is their complement.
 * jumps: num_jumps matrices with rates gammas[i]. */
ZL_API zl_status zl_zeno_system_create(int64_t dim, const double* h0, size_t num_projectors,
                                       const double* projectors, size_t num_jumps, const double* gammas,
                                       const double* jumps, const zl_noise_model* model, zl_zeno_system** out);
ZL_API void zl_zeno_system_destroy(zl_zeno_system* system);

ZL_API zl_status zl_zeno_system_dim(const zl_zeno_system* system, int64_t* out);
ZL_API zl_status zl_zeno_system_scale(const zl_zeno_system* system, double* out);
ZL_API zl_status zl_zeno_system_operation_rate(const zl_zeno_system* system, double* out);
ZL_API zl_status zl_zeno_system_eta(const zl_zeno_system* system, double* out);
ZL_API zl_status zl_zeno_system_set_tau_c(zl_zeno_system* system, double tau_c);

typedef struct zl_zeno_run_params {
  double dt_meas;
  double dt_int;
  uint64_t n_cycles;
  uint64_t seed;
  size_t initial_projector;
} zl_zeno_run_params;

typedef struct zl_zeno_run_result {
  double delta_p_hat;
  double delta_p_hat_stderr;
  double delta_p_mean;
  double delta_p_mean_stderr;
  double sigma_dot;
  double sigma_dot_stderr;
  uint64_t error_count;
  uint64_t null_escapes;
  uint64_t cycles;
  double total_time;
  double total_entropy;
  size_t final_projector;
} zl_zeno_run_result;

ZL_API zl_status zl_zeno_run(const zl_zeno_system* system, const zl_zeno_run_params* params,
                             zl_zeno_run_result* out);

typedef enum zl_regime { ZL_REGIME_ZENO = 0, ZL_REGIME_STRONG = 1 } zl_regime;

typedef struct zl_regime_scan_result {
  double exponent;
  double exponent_stderr;
  zl_regime regime;
} zl_regime_scan_result;

/* params->dt_meas and dt_int fix the integrator ratio; grid point i runs with
 * dt_meas = dt_grid[i] and seed zl_mix_seed(params->seed, i). per_point may
 * be NULL, otherwise it receives num_points results. */
ZL_API zl_status zl_regime_scan(const zl_zeno_system* system, const zl_zeno_run_params* params,
                                const double* dt_grid, size_t num_points, unsigned threads,
                                zl_regime_scan_result* out, zl_zeno_run_result* per_point);

/* ---- Composite allocation ---- */

typedef struct zl_allocation {
  double lambda;
  double total_rate;
  double total_sigma;
  double eta_bar;
} zl_allocation;

/* rates and sigmas receive n entries each (sigmas may be NULL). */
ZL_API zl_status zl_allocate_zeno(size_t n, const double* nu_z, const double* eta, double sigma_budget,
                                  double* rates, double* sigmas, zl_allocation* out);
ZL_API zl_status zl_allocate_strong(size_t n, const double* eta, double sigma_budget, double* rates,
                                    double* sigmas, zl_allocation* out);

typedef enum zl_cost_model { ZL_COST_ZENO = 0, ZL_COST_STRONG = 1 } zl_cost_model;
/* nu_z is ignored (may be NULL) for ZL_COST_STRONG. */
ZL_API zl_status zl_subsystem_sigma(zl_cost_model model, double nu_z, double eta, double rate, double* out);
ZL_API zl_status zl_verify_marginal_cost(zl_cost_model model, size_t n, const double* nu_z, const double* eta,
                                         const double* rates, double lambda, double rel_tol, int* ok);

/* ---- Chemical reaction network ---- */

typedef struct zl_crn_config {
  int64_t n_plus;
  int64_t n_minus;
  int64_t n_tokens;
  double k;
  double t_final;
  int chemostat;
  uint64_t seed;
  int trace_points;
} zl_crn_config;

typedef struct zl_crn_result {
  double nu_c_hat;
  double nu_c_stderr;
  double sigma_dot_event;
  double sigma_dot_event_stderr;
  double sigma_dot_analytic;
  double gamma;
  int64_t n_bias;
  double beta_initial;
  double beta_mean;
  uint64_t events;
  uint64_t forward_events;
  uint64_t backward_events;
  int64_t net_steps;
  double mean_wait;
  double mean_wait_stderr;
  double expected_wait;
  int bias_conserved;
  int chemostat;
} zl_crn_result;

ZL_API void zl_crn_config_default(zl_crn_config* config);
/* trace_t / trace_beta may be NULL; otherwise they need config->trace_points
 * entries and *trace_len receives the number written. */
ZL_API zl_status zl_crn_run(const zl_crn_config* config, zl_crn_result* out, double* trace_t, double* trace_beta,
                            size_t* trace_len);

/* flows: row-major num_states x num_states one-way flows. */
ZL_API zl_status zl_ctmc_entropy_rate(const double* flows, size_t num_states, double* out);

typedef enum zl_entropy_convention {
  ZL_CONVENTION_CLOSED_FORM = 0, /* N Gamma beta atanh(beta) */
  ZL_CONVENTION_EVENT_LOG = 1    /* twice that: per-event log accounting */
} zl_entropy_convention;
ZL_API zl_status zl_analytic_bias_entropy_rate(double gamma, double beta, double n_bias,
                                               zl_entropy_convention convention, double* out);

typedef struct zl_adiabatic_fit {
  double sigma_exponent;
  double sigma_exponent_stderr;
  double nu_exponent;
  double nu_exponent_stderr;
  double law_constant_mean;
  double law_constant_spread;
} zl_adiabatic_fit;

ZL_API zl_status zl_adiabatic_fit_results(const zl_crn_result* results, size_t n, double gamma, double n_bias,
                                          zl_adiabatic_fit* out);
ZL_API const char* zl_crn_convention_note(void);

/* ---- Geometric scaling ---- */

typedef struct zl_geometry {
  double r;
  double area_coeff;
  double vol_coeff;
  double area_exp;
  double vol_exp;
} zl_geometry;

ZL_API void zl_geometry_default(zl_geometry* geometry);
ZL_API zl_status zl_geometric_rates(const zl_geometry* geometry, double* nu_net, double* nu_single);
ZL_API zl_status zl_irreversible_rate(double delta_i, double sigma_dot, double* out);
ZL_API zl_status zl_advantage_ratio(const zl_geometry* geometry, double delta_i, double sigma_per_area, double* out);
ZL_API zl_status zl_crossover_radius(const zl_geometry* geometry, double delta_i, double sigma_per_area,
                                     double r_lo, double r_hi, double* out);

/* ---- Invariant validation ---- */

typedef struct zl_report zl_report;

typedef struct zl_check {
  const char* name;   /* owned by the report */
  const char* detail; /* owned by the report */
  int passed;
  double measured;
  double threshold;
} zl_check;

ZL_API zl_status zl_validate(uint64_t seed, int inject_trace_fault, zl_report** out);
ZL_API size_t zl_report_size(const zl_report* report);
ZL_API zl_status zl_report_item(const zl_report* report, size_t index, zl_check* out);
ZL_API int zl_report_all_passed(const zl_report* report);
ZL_API const char* zl_report_notes(const zl_report* report);
ZL_API void zl_report_destroy(zl_report* report);

#ifdef __cplusplus
}
#endif

#endif /* ZENOLAB_ZENOLAB_H_ */
