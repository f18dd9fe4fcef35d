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

#ifndef ZENOLAB_CRN_HPP_
#define ZENOLAB_CRN_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "zenolab/fit.hpp"

namespace zenolab {

// Bias-driven computational chain  (+) + C_i <-> (-) + C_{i+1}  with a single
// mass-action constant k in both directions.
struct CrnConfig {
  std::int64_t n_plus = 0;
  std::int64_t n_minus = 0;
  std::int64_t n_tokens = 1;  // C-chain tokens, each at an unbounded integer site
  double k = 1.0;             // second-order rate constant
  double t_final = 1.0;
  bool chemostat = true;      // restore the bias counts after every event
  std::uint64_t seed = 0;
  int trace_points = 0;       // samples of beta(t) on a uniform time grid

  void Validate() const;
  std::int64_t n_bias() const { return n_plus + n_minus; }
  double gamma() const { return k * static_cast<double>(n_tokens); }
  double beta() const;
};

struct CrnResult {
  Estimate nu_c_hat;          // net forward steps per unit time
  Estimate sigma_dot_event;   // event-log entropy rate, nats / time
  double sigma_dot_analytic = 0.0;  // N Gamma beta atanh(beta) at beta_mean
  double gamma = 0.0;
  std::int64_t n_bias = 0;
  double beta_initial = 0.0;
  double beta_mean = 0.0;     // time-weighted
  std::vector<std::pair<double, double>> beta_trace;  // (t, beta)
  std::uint64_t events = 0;
  std::uint64_t forward_events = 0;
  std::uint64_t backward_events = 0;
  std::int64_t net_steps = 0;
  Estimate mean_wait;         // mean inter-event time
  double expected_wait = 0.0; // 1 / total propensity (constant for this network)
  bool bias_conserved = true; // n_plus + n_minus unchanged after every event
  bool chemostat = true;
};

// Exact stochastic simulation. Each event adds
// log(a(executed | x) / a(reverse | x')) to the entropy log, x' being the
// post-event counts; in chemostat mode x' = x and this is log(n+/n-).
CrnResult RunGillespie(const CrnConfig& config);

// 1/2 sum_ij (nu_ij - nu_ji) log(nu_ij / nu_ji) over a square matrix of
// one-way flows (diagonal ignored). A one-way flow without its reverse is an
// error.
double CtmcEntropyRate(std::span<const double> flows, std::size_t num_states);

enum class EntropyConvention {
  kClosedForm,  // N Gamma beta atanh(beta)
  kEventLog     // 2 N Gamma beta atanh(beta), the ordered-pair / event accounting
};

double AnalyticBiasEntropyRate(double gamma, double beta, double n_bias, EntropyConvention convention);

struct AdiabaticFit {
  PowerLawFit sigma_vs_beta;
  PowerLawFit nu_vs_beta;
  std::vector<double> law_constants;  // nu_C^2 / (Gamma N sigma) per point
  double law_constant_mean = 0.0;
  double law_constant_spread = 0.0;   // (max - min) / mean
};

// Fits sigma ~ beta^a and nu_C ~ beta^b over chemostat results with
// 0 < beta <= 0.1 (at least 4 points).
AdiabaticFit VerifyAdiabaticLaw(std::span<const CrnResult> results, double gamma, double n_bias);

// Verbatim note on the factor-of-two entropy conventions.
const char* CrnConventionNote();

}  // namespace zenolab

#endif  // ZENOLAB_CRN_HPP_
