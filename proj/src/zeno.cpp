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
#include "zenolab/zeno.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "zenolab/error.hpp"
#include "zenolab/parallel.hpp"
#include "zenolab/random_ops.hpp"
#include "zenolab/rng.hpp"

namespace zenolab {

namespace {

constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kMeasurementStream = 2;

double XLogX(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

void ThermalNoiseModel::Validate() const {
  Require(m >= 1, ErrorCode::kInvalidArgument, "m must be a positive integer");
  Require(n >= 1, ErrorCode::kInvalidArgument, "n must be a positive integer");
  Require(g >= 2.0 && std::isfinite(g), ErrorCode::kInvalidArgument, "g must be >= 2");
  Require(temperature >= 0.0 && std::isfinite(temperature), ErrorCode::kInvalidArgument, "T must be >= 0");
  Require(epsilon > 0.0 && std::isfinite(epsilon), ErrorCode::kInvalidArgument, "epsilon must be positive");
  Require(tau_c > 0.0 && std::isfinite(tau_c), ErrorCode::kInvalidArgument, "tau_c must be positive");
  if (!particle_temperatures.empty()) {
    Require(particle_temperatures.size() == static_cast<std::size_t>(m) * static_cast<std::size_t>(n),
            ErrorCode::kInvalidArgument, "temperature profile needs m*n entries");
    double sum = 0.0;
    for (double t : particle_temperatures) {
      Require(t >= 0.0 && std::isfinite(t), ErrorCode::kInvalidArgument, "profile temperatures must be >= 0");
      sum += t;
    }
    Require(std::abs(sum / particle_temperatures.size() - temperature) <= 1e-9 * std::max(1.0, temperature),
            ErrorCode::kInvalidArgument, "temperature profile mean differs from T");
  }
}

double ThermalNoiseModel::NumStates() const { return std::pow(g, m); }

double ThermalNoiseModel::SumSquaredTemperature() const {
  if (particle_temperatures.empty()) return static_cast<double>(m) * n * temperature * temperature;
  double s = 0.0;
  for (double t : particle_temperatures) s += t * t;
  return s;
}

ComplexMatrix SampleThermalPotential(const ThermalNoiseModel& model, Eigen::Index dim, double t,
                                     std::uint64_t seed) {
  Require(dim > 0, ErrorCode::kInvalidArgument, "dimension must be positive");
  model.Validate();
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  const double variance = model.SumSquaredTemperature() / static_cast<double>(dim);
  if (variance == 0.0) return u;
  const double sigma = std::sqrt(variance);
  const auto piece = static_cast<std::int64_t>(std::floor(t / model.tau_c));
  RandomOps rng(MixSeed(seed, static_cast<std::uint64_t>(piece)));
  const double off = sigma / std::numbers::sqrt2;
  for (Eigen::Index i = 0; i < dim; ++i) {
    u(i, i) = sigma * rng.Normal();
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const double re = rng.Normal();
      const double im = rng.Normal();
      u(i, j) = Complex(off * re, off * im);
      u(j, i) = std::conj(u(i, j));
    }
  }
  return u;
}

ThermalPotential::ThermalPotential(ThermalNoiseModel model, Eigen::Index dim, std::uint64_t seed)
    : model_(std::move(model)), dim_(dim), seed_(seed), current_(ComplexMatrix::Zero(dim, dim)) {
  model_.Validate();
  zero_ = model_.SumSquaredTemperature() == 0.0;
}

const ComplexMatrix& ThermalPotential::At(double t) {
  if (zero_) return current_;
  const auto piece = static_cast<std::int64_t>(std::floor(t / model_.tau_c));
  if (!have_piece_ || piece != piece_) {
    current_ = SampleThermalPotential(model_, dim_, t, seed_);
    piece_ = piece;
    have_piece_ = true;
  }
  return current_;
}

double EntropyStep(double delta_p, double num_states, EntropyMode mode) {
  Require(num_states >= 2.0, ErrorCode::kInvalidArgument, "need at least two computational states");
  Require(delta_p >= 0.0 && delta_p <= 1.0, ErrorCode::kInvalidArgument, "delta_p must lie in [0, 1]");
  if (delta_p == 0.0) return 0.0;
  const double log_wrong = std::log(num_states - 1.0);
  if (mode == EntropyMode::kFirstOrder) {
    Require(delta_p < 1.0, ErrorCode::kModelViolation, "first-order entropy step diverges at delta_p = 1");
    return delta_p * (log_wrong + 1.0 - std::log(delta_p));
  }
  Require(delta_p < 1.0, ErrorCode::kInvalidArgument, "delta_p must be < 1");
  return std::max(0.0, -XLogX(delta_p) - XLogX(1.0 - delta_p) + delta_p * log_wrong);
}

ZenoRunResult RunZeno(const ZenoRunConfig& config) {
  const ZenoSystem& sys = config.system;
  const ProjectorPartition& partition = sys.partition;
  const Eigen::Index d = partition.dim();
  sys.model.Validate();
  Require(sys.h0.rows() == d && sys.h0.cols() == d, ErrorCode::kDimensionMismatch, "h0 does not match the partition");
  Require(sys.channel.empty() || sys.channel.dim() == d, ErrorCode::kDimensionMismatch,
          "channel does not match the partition");
  Require(partition.size() >= 2, ErrorCode::kInvalidArgument, "need at least two computational projectors");
  Require(config.dt_meas > 0.0 && std::isfinite(config.dt_meas), ErrorCode::kInvalidArgument, "dt_meas must be positive");
  Require(config.dt_int > 0.0 && config.dt_int <= config.dt_meas / 10.0 * (1.0 + 1e-12), ErrorCode::kInvalidArgument,
          "dt_int must be positive and <= dt_meas / 10");
  Require(config.n_cycles > 0, ErrorCode::kInvalidArgument, "n_cycles must be positive");
  Require(config.initial_projector < partition.size(), ErrorCode::kInvalidArgument, "initial projector out of range");

  const std::size_t num_valid = partition.size();
  const double num_states = static_cast<double>(num_valid);
  std::vector<ComplexMatrix> uniform(num_valid);
  for (std::size_t j = 0; j < num_valid; ++j) {
    const Projector& pj = partition.computational()[j];
    uniform[j] = pj.range_basis() * pj.range_basis().adjoint() / static_cast<double>(pj.rank());
  }

  std::size_t tracked = config.initial_projector;
  ComplexMatrix rho = config.initial_state ? config.initial_state->mat() : uniform[tracked];
  Require(rho.rows() == d, ErrorCode::kDimensionMismatch, "initial state does not match the partition");

  ThermalPotential potential(sys.model, d, MixSeed(config.seed, kNoiseStream));
  HamiltonianSpec spec;
  spec.h0 = sys.h0;
  if (!potential.is_zero()) {
    spec.u_of_t = [&potential](double t) { return potential.At(t); };
    spec.hold_interval = potential.hold_interval();
  }
  const std::uint64_t measurement_seed = MixSeed(config.seed, kMeasurementStream);

  std::vector<double> dp_series(config.n_cycles), entropy_series(config.n_cycles);
  std::vector<double> q(num_valid);
  ComplexMatrix shifted(d, d);
  ZenoRunResult result;
  const double allowed_drift = 1e-9 * std::max(1.0, config.dt_meas / config.dt_int);

  for (std::uint64_t c = 0; c < config.n_cycles; ++c) {
    const std::uint64_t cycle = config.start_cycle + c;
    const double t0 = static_cast<double>(cycle) * config.dt_meas;
    detail::EvolveInPlace(rho, spec, sys.channel, t0, config.dt_meas, config.dt_int);

    const double drift = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (drift > allowed_drift) {
      std::ostringstream os;
      os << "trace drift " << drift << " in cycle " << cycle;
      Fail(ErrorCode::kNumerical, os.str());
    }
    rho = 0.5 * (rho + rho.adjoint()).eval();
    // rho + 1e-6 is positive definite iff no eigenvalue is below -1e-6.
    shifted = rho;
    shifted.diagonal().array() += 1e-6;
    if (Eigen::LLT<ComplexMatrix>(shifted).info() != Eigen::Success) {
      const double min_ev = HermitianEigenvalues(rho)(0);
      std::ostringstream os;
      os << "positivity violated (min eigenvalue " << min_ev << ") in cycle " << cycle;
      Fail(ErrorCode::kNumerical, os.str());
    }

    double total = 0.0;
    for (std::size_t j = 0; j < num_valid; ++j) {
      const ComplexMatrix& b = partition.computational()[j].range_basis();
      q[j] = std::max(0.0, (b.adjoint() * rho * b).trace().real());
      total += q[j];
    }
    double q_null = 0.0;
    if (partition.noncomputational().rank() > 0) {
      const ComplexMatrix& b = partition.noncomputational().range_basis();
      q_null = std::max(0.0, (b.adjoint() * rho * b).trace().real());
    }
    total += q_null;
    for (double& x : q) x /= total;
    q_null /= total;
    if (q_null > 0.5) {
      std::ostringstream os;
      os << "state escaped to the non-computational subspace with probability " << q_null << " in cycle " << cycle;
      Fail(ErrorCode::kModelViolation, os.str());
    }

    double dp = q_null;
    for (std::size_t j = 0; j < num_valid; ++j) {
      if (j != tracked) dp += q[j];
    }
    dp = std::clamp(dp, 0.0, 1.0 - 1e-15);
    const double ds = EntropyStep(dp, num_states, EntropyMode::kExact);
    dp_series[c] = dp;
    entropy_series[c] = ds;
    result.total_entropy += ds;

    SplitMix64 engine(MixSeed(measurement_seed, cycle));
    const double draw = engine.Uniform();
    std::size_t outcome = num_valid;  // num_valid marks the non-computational outcome
    double cumulative = 0.0;
    for (std::size_t j = 0; j < num_valid; ++j) {
      cumulative += q[j];
      if (draw < cumulative) {
        outcome = j;
        break;
      }
    }
    if (outcome == num_valid && q_null == 0.0) outcome = tracked;  // round-off in the cumulative sum

    if (outcome == tracked) {
      const ComplexMatrix& b = partition.computational()[tracked].range_basis();
      const ComplexMatrix inner = b.adjoint() * rho * b;
      rho = b * inner * b.adjoint() / inner.trace().real();
    } else {
      ++result.error_count;
      if (outcome == num_valid) {
        ++result.null_escapes;
      } else {
        tracked = outcome;
      }
      rho = uniform[tracked];
    }
  }

  const auto n = static_cast<double>(config.n_cycles);
  result.cycles = config.n_cycles;
  result.total_time = n * config.dt_meas;
  const double p_hat = static_cast<double>(result.error_count) / n;
  result.delta_p_hat = {p_hat, std::sqrt(p_hat * (1.0 - p_hat) / n)};
  result.delta_p_mean = BatchMeans(dp_series);
  const Estimate per_cycle = BatchMeans(entropy_series);
  result.sigma_dot_hat = {result.total_entropy / result.total_time, per_cycle.std_error / config.dt_meas};
  result.final_projector = tracked;
  result.final_state = DensityMatrix(0.5 * (rho + rho.adjoint()));
  return result;
}

RegimeScanResult RegimeScan(const ZenoRunConfig& config, std::span<const double> dt_grid, unsigned threads) {
  Require(dt_grid.size() >= 5, ErrorCode::kInvalidArgument, "regime scan needs at least 5 grid points");
  const auto [lo, hi] = std::minmax_element(dt_grid.begin(), dt_grid.end());
  Require(*lo > 0.0, ErrorCode::kInvalidArgument, "grid intervals must be positive");
  Require(*hi / *lo >= 10.0 * (1.0 - 1e-12), ErrorCode::kInvalidArgument, "regime scan grid must span a decade");
  Require(config.dt_meas > 0.0 && config.dt_int > 0.0, ErrorCode::kInvalidArgument,
          "template config needs dt_meas and dt_int to fix the integration ratio");
  const double step_ratio = config.dt_int / config.dt_meas;

  RegimeScanResult out;
  out.dt_grid.assign(dt_grid.begin(), dt_grid.end());
  out.per_dt.resize(dt_grid.size());
  ParallelFor(dt_grid.size(), threads, [&](std::size_t i) {
    ZenoRunConfig point = config;
    point.dt_meas = dt_grid[i];
    point.dt_int = dt_grid[i] * step_ratio;
    point.seed = MixSeed(config.seed, i);
    point.start_cycle = 0;
    out.per_dt[i] = RunZeno(point);
  });

  std::vector<double> y, se;
  for (std::size_t i = 0; i < out.per_dt.size(); ++i) {
    const Estimate& e = out.per_dt[i].delta_p_mean;
    if (e.value <= 0.0) {
      std::ostringstream os;
      os << "no error probability observed at dt = " << dt_grid[i] << "; raise n_cycles";
      Fail(ErrorCode::kInsufficientData, os.str());
    }
    y.push_back(e.value);
    se.push_back(e.std_error);
  }
  const PowerLawFit fit = FitPowerLaw(out.dt_grid, y, se);
  out.exponent = fit.exponent;
  out.exponent_stderr = fit.exponent_stderr;
  out.regime = fit.exponent > 1.5 ? Regime::kZeno : Regime::kStrong;
  for (auto& r : out.per_dt) r.regime_exponent = fit.exponent;
  return out;
}

double Eta(const ThermalNoiseModel& model) {
  model.Validate();
  const double t = model.temperature;
  return model.n * std::numbers::pi * std::numbers::pi * t * t * std::log(model.g) / (model.epsilon * model.epsilon);
}

double ZenoBoundSigma(double nu_c, double nu_z, double eta) {
  Require(nu_z > 0.0, ErrorCode::kInvalidArgument, "nu_z must be positive");
  return nu_c * nu_c * eta / nu_z;
}

double MargolusLevitin(RateKind kind, const ThermalNoiseModel& model, double energy_total) {
  if (kind == RateKind::kComputation) {
    model.Validate();
    return model.m * model.epsilon / std::numbers::pi;
  }
  Require(energy_total > 0.0, ErrorCode::kInvalidArgument, "energy must be positive");
  return energy_total / std::numbers::pi;
}

double DissipationDelay(double eta, double energy_total) {
  Require(energy_total > 0.0, ErrorCode::kInvalidArgument, "energy must be positive");
  return std::numbers::pi * eta / energy_total;
}

ZenoSystem MakeBlockSystem(const BlockSystemParams& params) {
  params.model.Validate();
  Require(params.num_valid >= 2, ErrorCode::kInvalidArgument, "need at least two valid projectors");
  Require(params.valid_rank >= 1, ErrorCode::kInvalidArgument, "valid rank must be positive");
  const Eigen::Index used = params.num_valid * params.valid_rank;
  Require(used <= params.dim, ErrorCode::kDimensionMismatch, "valid blocks exceed the dimension");
  const Eigen::Index d = params.dim;
  const Eigen::Index r = params.valid_rank;

  std::vector<Eigen::Index> ranks(static_cast<std::size_t>(params.num_valid), r);
  ProjectorPartition partition = ProjectorPartition::ContiguousBlocks(d, ranks);

  // One traceless block shared by all valid subspaces.
  ComplexMatrix block = ComplexMatrix::Zero(r, r);
  if (r >= 2) {
    ThermalNoiseModel unit;
    unit.m = 1;
    unit.temperature = 1.0;
    block = SampleThermalPotential(unit, r, 0.0, params.structure_seed);
    block -= (block.trace() / static_cast<double>(r)) * ComplexMatrix::Identity(r, r);
    const Eigen::VectorXd ev = HermitianEigenvalues(block);
    const double spread = ev(r - 1) - ev(0);
    Require(spread > 0.0, ErrorCode::kNumerical, "degenerate block Hamiltonian");
    block *= params.model.m * params.model.epsilon / spread;
  }
  ComplexMatrix h0 = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < params.num_valid; ++k) h0.block(k * r, k * r, r, r) = block;

  LindbladChannel channel;
  if (params.jump == JumpKind::kCyclicShift) {
    Require(params.gamma >= 0.0, ErrorCode::kInvalidArgument, "gamma must be >= 0");
    ComplexMatrix shift = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < used; ++i) shift((i + r) % used, i) = 1.0;
    for (Eigen::Index i = used; i < d; ++i) shift(i, i) = 1.0;
    channel = LindbladChannel({JumpTerm{params.gamma, shift}});
  }
  return ZenoSystem{params.model, std::move(partition), std::move(h0), std::move(channel)};
}

double OperationRate(const ZenoSystem& system, std::size_t projector) {
  Require(projector < system.partition.size(), ErrorCode::kInvalidArgument, "projector index out of range");
  const ComplexMatrix& b = system.partition.computational()[projector].range_basis();
  const ComplexMatrix local = b.adjoint() * system.h0 * b;
  const Eigen::VectorXd ev = HermitianEigenvalues(local);
  return (ev(ev.size() - 1) - ev(0)) / std::numbers::pi;
}

double HamiltonianScale(const ZenoSystem& system) {
  const double d = static_cast<double>(system.partition.dim());
  const double entry_variance = system.model.SumSquaredTemperature() / d;
  return HermitianNorm(system.h0) + 2.0 * std::sqrt(d * entry_variance) + system.channel.rate_scale();
}

}  // namespace zenolab
