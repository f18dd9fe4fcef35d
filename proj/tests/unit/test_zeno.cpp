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

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "zenolab/error.hpp"
#include "zenolab/random_ops.hpp"
#include "zenolab/zeno.hpp"

using namespace zenolab;

namespace {

// Probability that a Poisson(x) count is not a multiple of `blocks`: the
// cyclic shift returns to the tracked block after `blocks` jumps.
double ShiftLeak(double x, int blocks) {
  double stay = 0.0, term = std::exp(-x);
  for (int k = 0; k < 60; ++k) {
    if (k % blocks == 0) stay += term;
    term *= x / (k + 1);
  }
  return 1.0 - stay;
}

ThermalNoiseModel Model(double temperature) {
  ThermalNoiseModel m;
  m.m = 2;
  m.n = 3;
  m.g = 2.0;
  m.temperature = temperature;
  m.epsilon = 1.5;
  m.tau_c = 0.2;
  return m;
}

ZenoRunConfig Config(JumpKind jump, double temperature, double gamma, double dt_scaled, std::uint64_t cycles) {
  BlockSystemParams bp;
  bp.model = Model(temperature);
  bp.model.n = 1;
  bp.jump = jump;
  bp.gamma = gamma;
  ZenoSystem sys = MakeBlockSystem(bp);
  const double scale = HamiltonianScale(sys);
  sys.model.tau_c = 0.1 / scale;
  ZenoRunConfig cfg{.system = sys};
  cfg.dt_meas = dt_scaled / scale;
  cfg.dt_int = cfg.dt_meas / 10.0;
  cfg.n_cycles = cycles;
  cfg.seed = 77;
  return cfg;
}

}  // namespace

TEST_CASE("noise model validation and derived quantities") {
  ThermalNoiseModel m = Model(0.5);
  CHECK_NOTHROW(m.Validate());
  CHECK(m.NumStates() == doctest::Approx(4.0));
  CHECK(m.SumSquaredTemperature() == doctest::Approx(6 * 0.25));
  m.particle_temperatures = {0.1, 0.2, 0.3, 0.4, 0.5, 0.5};
  CHECK_THROWS_AS(m.Validate(), Error);  // mean must equal temperature
  m.particle_temperatures = {0.4, 0.6, 0.5, 0.5, 0.3, 0.7};
  CHECK_NOTHROW(m.Validate());
  CHECK(m.SumSquaredTemperature() == doctest::Approx(0.16 + 0.36 + 0.25 + 0.25 + 0.09 + 0.49));
  ThermalNoiseModel bad = Model(0.5);
  bad.g = 1.0;
  CHECK_THROWS_AS(bad.Validate(), Error);
  bad = Model(-1.0);
  CHECK_THROWS_AS(bad.Validate(), Error);
}

TEST_CASE("thermal potential is Hermitian, piecewise constant and seeded") {
  const ThermalNoiseModel m = Model(0.8);
  const ComplexMatrix a = SampleThermalPotential(m, 6, 0.05, 3);
  CHECK(IsHermitian(a));
  CHECK((SampleThermalPotential(m, 6, 0.15, 3) - a).norm() == 0.0);  // same piece
  CHECK((SampleThermalPotential(m, 6, 0.25, 3) - a).norm() > 0.0);   // next piece
  CHECK((SampleThermalPotential(m, 6, 0.05, 4) - a).norm() > 0.0);   // other seed
  ThermalPotential cached(m, 6, 3);
  CHECK((cached.At(0.05) - a).norm() == 0.0);
  CHECK(ThermalPotential(Model(0.0), 6, 3).is_zero());
}

TEST_CASE("thermal potential entry variance") {
  const ThermalNoiseModel m = Model(0.8);
  const int dim = 4, samples = 4000;
  double off = 0.0, diag = 0.0;
  for (int s = 0; s < samples; ++s) {
    const ComplexMatrix u = SampleThermalPotential(m, dim, 0.0, static_cast<std::uint64_t>(s));
    off += std::norm(u(0, 1));
    diag += std::norm(u(2, 2));
  }
  const double expected = m.SumSquaredTemperature() / dim;
  CHECK(off / samples == doctest::Approx(expected).epsilon(0.06));
  CHECK(diag / samples == doctest::Approx(expected).epsilon(0.08));
}

TEST_CASE("entropy step closed forms") {
  CHECK(EntropyStep(0.0, 4.0, EntropyMode::kExact) == 0.0);
  CHECK(EntropyStep(0.0, 4.0, EntropyMode::kFirstOrder) == 0.0);
  const double dp = 0.3;
  const double binary = -dp * std::log(dp) - (1 - dp) * std::log(1 - dp);
  CHECK(EntropyStep(dp, 2.0, EntropyMode::kExact) == doctest::Approx(binary).epsilon(1e-14));
  CHECK(EntropyStep(dp, 5.0, EntropyMode::kExact) == doctest::Approx(binary + dp * std::log(4.0)).epsilon(1e-14));
  CHECK(EntropyStep(1e-3, 4.0, EntropyMode::kFirstOrder) ==
        doctest::Approx(1e-3 * (std::log(3.0) + 1.0 - std::log(1e-3))).epsilon(1e-14));
  CHECK_THROWS_AS(EntropyStep(1.5, 4.0, EntropyMode::kExact), Error);
  CHECK_THROWS_AS(EntropyStep(0.1, 1.0, EntropyMode::kExact), Error);
}

TEST_CASE("closed-form bounds") {
  const ThermalNoiseModel m = Model(0.5);
  const double eta = 3 * std::numbers::pi * std::numbers::pi * 0.25 * std::log(2.0) / (1.5 * 1.5);
  CHECK(Eta(m) == doctest::Approx(eta).epsilon(1e-14));
  CHECK(ZenoBoundSigma(2.0, 8.0, eta) == doctest::Approx(4.0 * eta / 8.0).epsilon(1e-14));
  CHECK(MargolusLevitin(RateKind::kComputation, m, 0.0) == doctest::Approx(2 * 1.5 / std::numbers::pi));
  CHECK(MargolusLevitin(RateKind::kMeasurement, m, 7.0) == doctest::Approx(7.0 / std::numbers::pi));
  CHECK(DissipationDelay(eta, 7.0) == doctest::Approx(std::numbers::pi * eta / 7.0).epsilon(1e-14));
}

TEST_CASE("block system structure") {
  BlockSystemParams bp;
  bp.model = Model(0.3);
  const ZenoSystem sys = MakeBlockSystem(bp);
  CHECK(sys.partition.size() == 4);
  CHECK(sys.partition.noncomputational().rank() == 0);
  for (const Projector& p : sys.partition.computational()) {
    CHECK((p.mat() * sys.h0 - sys.h0 * p.mat()).norm() < 1e-12);
    const Eigen::VectorXd ev = HermitianEigenvalues(p.range_basis().adjoint() * sys.h0 * p.range_basis());
    CHECK(ev(ev.size() - 1) - ev(0) == doctest::Approx(bp.model.m * bp.model.epsilon).epsilon(1e-12));
  }
  CHECK(OperationRate(sys) == doctest::Approx(bp.model.m * bp.model.epsilon / std::numbers::pi).epsilon(1e-12));
  CHECK(HamiltonianScale(sys) == doctest::Approx(HermitianNorm(sys.h0) + 2.0 * std::sqrt(sys.model.SumSquaredTemperature())));

  bp.dim = 9;
  bp.jump = JumpKind::kCyclicShift;
  bp.gamma = 0.5;
  const ZenoSystem shifted = MakeBlockSystem(bp);
  CHECK(shifted.partition.noncomputational().rank() == 1);
  const ComplexMatrix& l = shifted.channel.terms().front().jump;
  CHECK((l.adjoint() * l - ComplexMatrix::Identity(9, 9)).norm() < 1e-12);
  const auto& ps = shifted.partition.computational();
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const Projector& next = ps[(k + 1) % ps.size()];
    CHECK((next.mat() * l * ps[k].mat() - l * ps[k].mat()).norm() < 1e-12);
  }
}

TEST_CASE("noise-free block system never errs") {
  const ZenoRunResult r = RunZeno(Config(JumpKind::kNone, 0.0, 0.0, 0.1, 200));
  CHECK(r.error_count == 0);
  CHECK(r.delta_p_mean.value < 1e-15);
  CHECK(r.total_entropy < 1e-12);
}

TEST_CASE("cyclic shift leak matches the Poisson jump count") {
  const ZenoRunConfig cfg = Config(JumpKind::kCyclicShift, 0.0, 1.0, 0.05, 500);
  const ZenoRunResult r = RunZeno(cfg);
  CHECK(r.delta_p_mean.value == doctest::Approx(ShiftLeak(cfg.dt_meas, 4)).epsilon(1e-10));
  CHECK(r.delta_p_hat.value == doctest::Approx(r.delta_p_mean.value).epsilon(0.5));
}

TEST_CASE("runs are deterministic in the seed") {
  const ZenoRunConfig cfg = Config(JumpKind::kNone, 1.0, 0.0, 0.1, 300);
  const ZenoRunResult a = RunZeno(cfg), b = RunZeno(cfg);
  CHECK(a.delta_p_mean.value == b.delta_p_mean.value);
  CHECK(a.total_entropy == b.total_entropy);
  CHECK(a.error_count == b.error_count);
  ZenoRunConfig other = cfg;
  other.seed = 78;
  CHECK(RunZeno(other).delta_p_mean.value != a.delta_p_mean.value);
}

TEST_CASE("split runs reproduce the whole run") {
  ZenoRunConfig cfg = Config(JumpKind::kNone, 1.0, 0.0, 0.2, 400);
  const ZenoRunResult whole = RunZeno(cfg);
  cfg.n_cycles = 150;
  const ZenoRunResult first = RunZeno(cfg);
  cfg.n_cycles = 250;
  cfg.start_cycle = 150;
  cfg.initial_state = first.final_state;
  cfg.initial_projector = first.final_projector;
  const ZenoRunResult second = RunZeno(cfg);
  CHECK(whole.total_entropy == doctest::Approx(first.total_entropy + second.total_entropy).epsilon(1e-12));
  CHECK(whole.error_count == first.error_count + second.error_count);
  CHECK(whole.final_projector == second.final_projector);
}

TEST_CASE("Zeno suppression: halving dt quarters the error probability") {
  ZenoRunConfig cfg = Config(JumpKind::kNone, 1.0, 0.0, 0.04, 2000);
  const double full = RunZeno(cfg).delta_p_mean.value;
  cfg.dt_meas *= 0.5;
  cfg.dt_int *= 0.5;
  const double half = RunZeno(cfg).delta_p_mean.value;
  CHECK(half / full > 0.15);
  CHECK(half / full < 0.35);
}

TEST_CASE("regime scan input checks and classification") {
  const ZenoRunConfig cfg = Config(JumpKind::kCyclicShift, 0.0, 1.0, 0.01, 200);
  const double s = cfg.dt_meas / 0.01;
  const std::vector<double> short_grid{1e-3 * s, 1e-2 * s};
  CHECK_THROWS_AS(RegimeScan(cfg, short_grid), Error);
  const std::vector<double> narrow{1e-3 * s, 2e-3 * s, 3e-3 * s, 4e-3 * s, 5e-3 * s};
  CHECK_THROWS_AS(RegimeScan(cfg, narrow), Error);
  const std::vector<double> grid{1e-3 * s, 3e-3 * s, 1e-2 * s, 3e-2 * s, 1e-1 * s};
  const RegimeScanResult r = RegimeScan(cfg, grid);
  CHECK(r.regime == Regime::kStrong);
  CHECK(r.exponent == doctest::Approx(1.0).epsilon(0.05));
  CHECK(r.per_dt.size() == grid.size());
}

TEST_CASE("run configuration errors") {
  ZenoRunConfig cfg = Config(JumpKind::kNone, 1.0, 0.0, 0.1, 10);
  cfg.dt_int = cfg.dt_meas;  // coarser than dt_meas / 10
  CHECK_THROWS_AS(RunZeno(cfg), Error);
  cfg = Config(JumpKind::kNone, 1.0, 0.0, 0.1, 10);
  cfg.initial_projector = 9;
  CHECK_THROWS_AS(RunZeno(cfg), Error);
  cfg = Config(JumpKind::kNone, 1.0, 0.0, 0.1, 0);
  CHECK_THROWS_AS(RunZeno(cfg), Error);
}
