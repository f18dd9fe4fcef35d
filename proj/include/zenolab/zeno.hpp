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
#ifndef ZENOLAB_ZENO_HPP_
#define ZENOLAB_ZENO_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zenolab/fit.hpp"
#include "zenolab/gksl.hpp"
#include "zenolab/linop.hpp"

namespace zenolab {

// Parameters of the zero-mean Gaussian thermal potential U(t).
struct ThermalNoiseModel {
  int m = 1;                 // digital subsystems
  int n = 1;                 // primitive particles per subsystem
  double g = 2.0;            // geometric-mean state count per subsystem
  double temperature = 0.0;  // effective temperature T (energy units)
  double epsilon = 1.0;      // average energy per particle
  double tau_c = 1.0;        // U is resampled every tau_c
  // Optional per-particle temperatures T_ij (m*n entries, mean == temperature).
  std::vector<double> particle_temperatures;

  void Validate() const;
  double NumStates() const;              // M = g^m
  double SumSquaredTemperature() const;  // sum_ij T_ij^2, or m n T^2 without a profile
};

// U(t) for the piece floor(t / tau_c): Hermitian with independent Gaussian
// entries, E|U_ij|^2 = sum_ij T_ij^2 / dim. For a state spread over the
// whole space this makes <U P^perp U> = m n T^2 tr(P^perp) / tr(1).
ComplexMatrix SampleThermalPotential(const ThermalNoiseModel& model, Eigen::Index dim, double t,
                                     std::uint64_t seed);

// Caches the current piece of U(t). One instance per simulation run.
class ThermalPotential {
 public:
  ThermalPotential(ThermalNoiseModel model, Eigen::Index dim, std::uint64_t seed);

  bool is_zero() const { return zero_; }
  double hold_interval() const { return model_.tau_c; }
  const ComplexMatrix& At(double t);

 private:
  ThermalNoiseModel model_;
  Eigen::Index dim_;
  std::uint64_t seed_;
  bool zero_;
  bool have_piece_ = false;
  std::int64_t piece_ = 0;
  ComplexMatrix current_;
};

enum class EntropyMode { kFirstOrder, kExact };

// Entropy produced by one correction cycle that errs with probability
// delta_p into one of M - 1 equally likely wrong states (nats).
//   exact:       -dp log dp - (1-dp) log(1-dp) + dp log(M-1)
//   first order:  dp (log(M-1) + 1 - log dp)
double EntropyStep(double delta_p, double num_states, EntropyMode mode);

struct ZenoSystem {
  ThermalNoiseModel model;
  ProjectorPartition partition;
  ComplexMatrix h0;
  LindbladChannel channel;
};

struct ZenoRunConfig {
  ZenoSystem system;
  double dt_meas = 0.0;  // 1 / nu_Z
  double dt_int = 0.0;   // integrator step, <= dt_meas / 10
  std::uint64_t n_cycles = 0;
  std::uint64_t seed = 0;
  std::size_t initial_projector = 0;
  // Continuation support: cycle c covers [c dt_meas, (c+1) dt_meas) and draws
  // its randomness from stream c, so a run split in two reproduces the whole.
  std::uint64_t start_cycle = 0;
  std::optional<DensityMatrix> initial_state{};  // default: uniform on the initial projector
};

struct ZenoRunResult {
  Estimate delta_p_hat;    // error_count / cycles, binomial standard error
  Estimate delta_p_mean;   // mean per-cycle error probability, batch-means error
  Estimate sigma_dot_hat;  // entropy production rate, nats / time
  std::uint64_t error_count = 0;
  std::uint64_t null_escapes = 0;
  std::uint64_t cycles = 0;
  double total_time = 0.0;
  double total_entropy = 0.0;
  std::optional<double> regime_exponent;
  std::size_t final_projector = 0;
  std::optional<DensityMatrix> final_state;
};

// Repeated evolve / measure / correct cycles. After each measurement the
// state is either kept (tracked projector observed, P rho P renormalized) or
// reset to the uniform mixture on the observed projector. An outcome in the
// non-computational subspace counts as an error and resets onto the tracked
// projector.
ZenoRunResult RunZeno(const ZenoRunConfig& config);

enum class Regime { kZeno, kStrong };

struct RegimeScanResult {
  double exponent = 0.0;
  double exponent_stderr = 0.0;
  Regime regime = Regime::kZeno;
  std::vector<double> dt_grid;
  std::vector<ZenoRunResult> per_dt;
};

// Runs one RunZeno per grid point (seed MixSeed(config.seed, i), dt_int
// scaled with dt) and fits log delta_p_mean against log dt. Slope > 1.5 is
// classified as Zeno. Grid must span a decade with at least 5 points.
RegimeScanResult RegimeScan(const ZenoRunConfig& config, std::span<const double> dt_grid, unsigned threads = 1);

// n pi^2 T^2 log(g) / eps^2
double Eta(const ThermalNoiseModel& model);
// nu_C^2 eta / nu_Z
double ZenoBoundSigma(double nu_c, double nu_z, double eta);

enum class RateKind { kComputation, kMeasurement };
// Computation: m eps / pi (the n redundant particles per subsystem cancel).
// Measurement: E / pi.
double MargolusLevitin(RateKind kind, const ThermalNoiseModel& model, double energy_total);

// pi eta / E: lower bound on (dissipation per op) x (delay per op).
double DissipationDelay(double eta, double energy_total);

// --- Ready-made systems ---

enum class JumpKind {
  kNone,
  kCyclicShift  // unitary jump sending computational block k onto block k+1
};

struct BlockSystemParams {
  Eigen::Index dim = 8;
  int num_valid = 4;
  Eigen::Index valid_rank = 2;
  ThermalNoiseModel model;
  JumpKind jump = JumpKind::kNone;
  double gamma = 0.0;
  std::uint64_t structure_seed = 1;
};

// Contiguous computational blocks, leftover basis vectors non-computational.
// h0 is block diagonal with the same traceless block on every valid
// subspace, scaled so its spectral spread is m * eps.
ZenoSystem MakeBlockSystem(const BlockSystemParams& params);

// Operations per unit time implied by h0 on one valid block: an operation
// is one transition to an orthogonal state, which under a spectral spread
// dE takes time pi / dE.
double OperationRate(const ZenoSystem& system, std::size_t projector = 0);

// ||h0|| + 2 sqrt(dim E|U_ij|^2) + sum_i gamma_i ||L_i||^2; the unit in which
// measurement intervals are quoted.
double HamiltonianScale(const ZenoSystem& system);

}  // namespace zenolab

#endif  // ZENOLAB_ZENO_HPP_
