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

#include "zenolab/crn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "zenolab/error.hpp"

namespace zenolab {

void CrnConfig::Validate() const {
  Require(n_plus >= 0 && n_minus >= 0 && n_tokens >= 0, ErrorCode::kInvalidArgument, "species counts must be >= 0");
  Require(n_bias() >= 1, ErrorCode::kInvalidArgument, "need at least one bias particle");
  Require(k > 0.0 && std::isfinite(k), ErrorCode::kInvalidArgument, "rate constant k must be positive");
  Require(t_final > 0.0 && std::isfinite(t_final), ErrorCode::kInvalidArgument, "t_final must be positive");
  Require(trace_points >= 0, ErrorCode::kInvalidArgument, "trace_points must be >= 0");
}

double CrnConfig::beta() const {
  return static_cast<double>(n_plus - n_minus) / static_cast<double>(n_bias());
}

CrnResult RunGillespie(const CrnConfig& config) {
  config.Validate();
  Require(config.n_tokens > 0, ErrorCode::kModelViolation, "zero total propensity: no chain tokens");
  if (config.chemostat) {
    Require(config.n_plus > 0 && config.n_minus > 0, ErrorCode::kModelViolation,
            "chemostat with |beta| = 1 has no reverse reaction; entropy production diverges");
  }

  const double k_tok = config.k * static_cast<double>(config.n_tokens);
  const std::int64_t n_bias = config.n_bias();
  std::int64_t n_plus = config.n_plus;
  std::int64_t n_minus = config.n_minus;
  std::vector<std::int64_t> position(static_cast<std::size_t>(config.n_tokens), 0);

  std::mt19937_64 engine(config.seed);
  // Hand-rolled conversions keep the stream identical across standard libraries.
  const auto uniform = [](std::mt19937_64& e) { return static_cast<double>(e() >> 11) * 0x1.0p-53; };
  const auto pick = [&position](std::mt19937_64& e) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(e()) * position.size()) >> 64);
  };

  CrnResult out;
  out.gamma = k_tok;
  out.n_bias = n_bias;
  out.chemostat = config.chemostat;
  out.beta_initial = config.beta();
  out.expected_wait = 1.0 / (k_tok * static_cast<double>(n_bias));

  std::vector<double> trace_times;
  if (config.trace_points == 1) trace_times.push_back(0.0);
  for (int j = 0; config.trace_points >= 2 && j < config.trace_points; ++j) {
    trace_times.push_back(config.t_final * j / (config.trace_points - 1));
  }
  std::size_t next_trace = 0;

  double t = 0.0;
  double beta_integral = 0.0;
  double wait_sum = 0.0, wait_sq = 0.0;
  double entropy = 0.0, entropy_sq = 0.0;
  auto current_beta = [&] { return static_cast<double>(n_plus - n_minus) / static_cast<double>(n_bias); };
  auto record_until = [&](double t_limit, bool inclusive) {
    while (next_trace < trace_times.size() &&
           (trace_times[next_trace] < t_limit || (inclusive && trace_times[next_trace] <= t_limit))) {
      out.beta_trace.emplace_back(trace_times[next_trace], current_beta());
      ++next_trace;
    }
  };

  while (true) {
    const double a_fwd = k_tok * static_cast<double>(n_plus);
    const double a_bwd = k_tok * static_cast<double>(n_minus);
    const double a_total = a_fwd + a_bwd;
    if (a_total <= 0.0) Fail(ErrorCode::kModelViolation, "zero total propensity");
    const double wait = -std::log1p(-uniform(engine)) / a_total;
    if (t + wait > config.t_final) {
      beta_integral += current_beta() * (config.t_final - t);
      record_until(config.t_final, true);
      break;
    }
    record_until(t + wait, false);
    beta_integral += current_beta() * wait;
    t += wait;
    wait_sum += wait;
    wait_sq += wait * wait;
    ++out.events;

    const bool forward = uniform(engine) * a_total < a_fwd;
    const std::size_t token = pick(engine);
    double ds = 0.0;
    if (forward) {
      ++position[token];
      ++out.forward_events;
      ++out.net_steps;
      if (!config.chemostat) {
        --n_plus;
        ++n_minus;
      }
      ds = std::log(a_fwd / (k_tok * static_cast<double>(n_minus)));
    } else {
      --position[token];
      ++out.backward_events;
      --out.net_steps;
      if (!config.chemostat) {
        ++n_plus;
        --n_minus;
      }
      ds = std::log(a_bwd / (k_tok * static_cast<double>(n_plus)));
    }
    entropy += ds;
    entropy_sq += ds * ds;
    if (n_plus + n_minus != n_bias || n_plus < 0 || n_minus < 0) out.bias_conserved = false;
  }

  const double tf = config.t_final;
  const auto events = static_cast<double>(out.events);
  out.nu_c_hat = {static_cast<double>(out.net_steps) / tf, std::sqrt(events) / tf};
  out.sigma_dot_event = {entropy / tf, std::sqrt(entropy_sq) / tf};
  out.beta_mean = beta_integral / tf;
  if (out.events > 0) {
    const double mean = wait_sum / events;
    const double var = out.events > 1 ? std::max(0.0, (wait_sq - events * mean * mean) / (events - 1.0)) : 0.0;
    out.mean_wait = {mean, std::sqrt(var / events)};
  }
  out.sigma_dot_analytic = std::abs(out.beta_mean) < 1.0
                               ? AnalyticBiasEntropyRate(k_tok, out.beta_mean, static_cast<double>(n_bias),
                                                         EntropyConvention::kClosedForm)
                               : std::numeric_limits<double>::infinity();
  // The positions are the chain state; their sum must match the step count.
  std::int64_t displacement = 0;
  for (std::int64_t p : position) displacement += p;
  if (displacement != out.net_steps) Fail(ErrorCode::kNumerical, "chain displacement bookkeeping mismatch");
  return out;
}

double CtmcEntropyRate(std::span<const double> flows, std::size_t num_states) {
  Require(num_states >= 1 && flows.size() == num_states * num_states, ErrorCode::kDimensionMismatch,
          "flow matrix must be num_states x num_states");
  double sigma = 0.0;
  for (std::size_t i = 0; i < num_states; ++i) {
    for (std::size_t j = 0; j < num_states; ++j) {
      if (i == j) continue;
      const double fwd = flows[i * num_states + j];
      const double bwd = flows[j * num_states + i];
      Require(fwd >= 0.0 && std::isfinite(fwd), ErrorCode::kInvalidArgument, "flows must be finite and >= 0");
      if ((fwd > 0.0) != (bwd > 0.0)) {
        std::ostringstream os;
        os << "flow " << i << "->" << j << " has no reverse; microscopic reversibility broken";
        Fail(ErrorCode::kModelViolation, os.str());
      }
      if (fwd > 0.0) sigma += 0.5 * (fwd - bwd) * std::log(fwd / bwd);
    }
  }
  return std::max(sigma, 0.0);
}

double AnalyticBiasEntropyRate(double gamma, double beta, double n_bias, EntropyConvention convention) {
  Require(gamma >= 0.0 && n_bias >= 0.0, ErrorCode::kInvalidArgument, "gamma and n_bias must be >= 0");
  Require(std::abs(beta) < 1.0, ErrorCode::kModelViolation, "|beta| >= 1: atanh diverges, adiabaticity is lost");
  const double per_particle = gamma * beta * std::atanh(beta);
  return (convention == EntropyConvention::kEventLog ? 2.0 : 1.0) * n_bias * per_particle;
}

AdiabaticFit VerifyAdiabaticLaw(std::span<const CrnResult> results, double gamma, double n_bias) {
  Require(results.size() >= 4, ErrorCode::kInsufficientData, "adiabatic-law fit needs at least 4 grid points");
  Require(gamma > 0.0 && n_bias > 0.0, ErrorCode::kInvalidArgument, "gamma and n_bias must be positive");
  std::vector<double> beta, sigma, sigma_se, nu, nu_se;
  AdiabaticFit fit;
  for (const auto& r : results) {
    Require(r.chemostat, ErrorCode::kInvalidArgument, "adiabatic-law fit needs chemostat runs");
    Require(r.beta_initial > 0.0 && r.beta_initial <= 0.1 + 1e-12, ErrorCode::kInvalidArgument,
            "beta grid must lie in (0, 0.1]");
    Require(r.sigma_dot_event.value > 0.0 && r.nu_c_hat.value > 0.0, ErrorCode::kInsufficientData,
            "non-positive rate in the beta grid; increase t_final");
    beta.push_back(r.beta_initial);
    sigma.push_back(r.sigma_dot_event.value);
    sigma_se.push_back(r.sigma_dot_event.std_error);
    nu.push_back(r.nu_c_hat.value);
    nu_se.push_back(r.nu_c_hat.std_error);
    fit.law_constants.push_back(r.nu_c_hat.value * r.nu_c_hat.value / (gamma * n_bias * r.sigma_dot_event.value));
  }
  fit.sigma_vs_beta = FitPowerLaw(beta, sigma, sigma_se);
  fit.nu_vs_beta = FitPowerLaw(beta, nu, nu_se);
  double sum = 0.0;
  for (double c : fit.law_constants) sum += c;
  fit.law_constant_mean = sum / fit.law_constants.size();
  const auto [lo, hi] = std::minmax_element(fit.law_constants.begin(), fit.law_constants.end());
  fit.law_constant_spread = (*hi - *lo) / fit.law_constant_mean;
  return fit;
}

const char* CrnConventionNote() {
  return "CRN entropy convention: the half-weighted ordered-pair CTMC sum and the per-event log accounting give "
         "2*N*Gamma*beta*atanh(beta); the closed form N*Gamma*beta*atanh(beta) is smaller by exactly a factor of 2. "
         "Both are reported; the law constant nu_C^2/(Gamma*N*Sigma) is ~1/2 under the event-log convention and ~1 "
         "under the closed form. Acceptance checks its constancy across beta, not its absolute value.";
}

}  // namespace zenolab
