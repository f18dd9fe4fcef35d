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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "zenolab/composite.hpp"
#include "zenolab/crn.hpp"
#include "zenolab/fit.hpp"
#include "zenolab/gksl.hpp"
#include "zenolab/random_ops.hpp"
#include "zenolab/scalecalc.hpp"
#include "zenolab/validate.hpp"
#include "zenolab/zeno.hpp"

using namespace zenolab;

namespace {

int g_failures = 0;

void Report(int id, bool pass, const std::string& what, const std::string& measured, double seconds) {
  std::printf("CRITERION %2d %s  %s | %s | %.1fs\n", id, pass ? "PASS" : "FAIL", what.c_str(), measured.c_str(),
              seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string Fmt(const char* fmt, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void Run(int id, const std::string& what, const std::function<std::pair<bool, std::string>()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto [pass, measured] = body();
    Report(id, pass, what, measured, Seconds(t0));
  } catch (const std::exception& e) {
    Report(id, false, what, std::string("exception: ") + e.what(), Seconds(t0));
  }
}

std::vector<double> LogGrid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1)));
  return g;
}

ZenoRunConfig BlockConfig(double temperature, JumpKind jump, double gamma) {
  BlockSystemParams bp;
  bp.dim = 8;
  bp.num_valid = 4;
  bp.valid_rank = 2;
  bp.model.m = 2;
  bp.model.n = 1;
  bp.model.g = 2.0;
  bp.model.temperature = temperature;
  bp.model.epsilon = 1.0;
  bp.jump = jump;
  bp.gamma = gamma;
  ZenoRunConfig cfg{.system = MakeBlockSystem(bp)};
  cfg.system.model.tau_c = 0.1 / HamiltonianScale(cfg.system);
  cfg.n_cycles = 100000;
  cfg.seed = 2026;
  return cfg;
}

std::pair<bool, std::string> RegimeExponent(const ZenoRunConfig& base, double target) {
  const auto t0 = std::chrono::steady_clock::now();
  const double scale = HamiltonianScale(base.system);
  std::vector<double> grid;
  for (double f : LogGrid(1e-3, 1e-1, 7)) grid.push_back(f / scale);
  ZenoRunConfig cfg = base;
  cfg.dt_meas = grid.front();
  cfg.dt_int = grid.front() / 10.0;
  const RegimeScanResult r = RegimeScan(cfg, grid);
  const double secs = Seconds(t0);
  const bool pass = std::abs(r.exponent - target) <= 0.1 && secs < 120.0;
  return {pass, Fmt("exponent %.4f +- %.4f (target %.1f +- 0.1), runtime %.1f s (< 120), 7 points x 1e5 cycles",
                    r.exponent, r.exponent_stderr, target, secs)};
}

// Grid maximum of sum_i nu_i on the ellipsoid sum_i nu_i^2 c_i = budget with
// c_i = eta_i / nu_z_i, by nested zooming over angular coordinates.
double BruteForceTotalRate(const std::vector<double>& c, double budget) {
  const std::size_t n = c.size();
  const auto total = [&](double theta, double phi) {
    std::vector<double> u;
    if (n == 1) u = {1.0};
    if (n == 2) u = {std::cos(theta), std::sin(theta)};
    if (n == 3) u = {std::cos(theta), std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi)};
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += u[i] * std::sqrt(budget / c[i]);
    return s;
  };
  double t_lo = 0.0, t_hi = std::numbers::pi / 2, p_lo = 0.0, p_hi = std::numbers::pi / 2;
  double best = -1.0, bt = 0.0, bp = 0.0;
  const int k = n == 3 ? 200 : 40000;
  for (int round = 0; round < 3; ++round) {
    for (int i = 0; i <= k; ++i) {
      const double t = t_lo + (t_hi - t_lo) * i / k;
      for (int j = 0; j <= (n == 3 ? k : 0); ++j) {
        const double p = p_lo + (p_hi - p_lo) * j / k;
        const double v = total(t, p);
        if (v > best) {
          best = v;
          bt = t;
          bp = p;
        }
      }
    }
    const double wt = 4.0 * (t_hi - t_lo) / k, wp = 4.0 * (p_hi - p_lo) / k;
    t_lo = std::max(0.0, bt - wt);
    t_hi = std::min(std::numbers::pi / 2, bt + wt);
    p_lo = std::max(0.0, bp - wp);
    p_hi = std::min(std::numbers::pi / 2, bp + wp);
  }
  return best;
}

CrnResult ChemostatRun(std::int64_t n_plus, std::int64_t n_minus, double t_final, std::uint64_t seed) {
  CrnConfig c;
  c.n_plus = n_plus;
  c.n_minus = n_minus;
  c.n_tokens = 10;
  c.k = 0.1;  // Gamma = 1
  c.t_final = t_final;
  c.seed = seed;
  return RunGillespie(c);
}

}  // namespace

int main() {
  Run(1, "Zeno regime exponent", [] { return RegimeExponent(BlockConfig(1.0, JumpKind::kNone, 0.0), 2.0); });

  Run(2, "Strong-Lindbladian exponent",
      [] { return RegimeExponent(BlockConfig(0.0, JumpKind::kCyclicShift, 1.0), 1.0); });

  Run(3, "Second-order formula fidelity", [] {
    RandomOps rng(303);
    double worst_ratio = 0.0;
    double min_c = 1e300, max_c = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
      const Eigen::Index d = rng.Int(2, 8);
      const Projector p = rng.RandomProjector(d, rng.Int(1, static_cast<int>(d) - 1));
      const DensityMatrix rho = rng.DensityIn(p);
      const ComplexMatrix h = rng.Hermitian(d);
      const LindbladChannel ch({{0.2 + 0.6 * rng.Uniform(), 0.5 * rng.Ginibre(d, d)}});
      const double scale = HermitianNorm(h) + ch.rate_scale();
      std::vector<double> cs;
      for (int k = 0; k <= 4; ++k) {
        const double dt = 0.05 / scale / std::pow(2.0, k);
        const double oracle = MeasureAfterEvolve(rho, {h, {}, 0.0}, ch, p, dt, dt / 1000.0).delta_p;
        const double so = ErrorProbSecondOrder(rho, h, ch, p, dt);
        cs.push_back(std::abs(so - oracle) / (dt * dt * dt));
      }
      for (std::size_t k = 1; k < cs.size(); ++k) {
        const double r = std::max(cs[k] / cs[k - 1], cs[k - 1] / cs[k]);
        worst_ratio = std::max(worst_ratio, r);
      }
      min_c = std::min(min_c, *std::min_element(cs.begin(), cs.end()));
      max_c = std::max(max_c, *std::max_element(cs.begin(), cs.end()));
    }
    return std::pair{worst_ratio <= 2.0,
                     Fmt("worst C ratio between halvings %.4f (<= 2); C in [%.3g, %.3g], 20 instances dims 2-8",
                         worst_ratio, min_c, max_c)};
  });

  Run(4, "Block-reduction identity", [] {
    RandomOps rng(404);
    double worst = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
      const Eigen::Index d = rng.Int(2, 8);
      const Projector p = rng.RandomProjector(d, rng.Int(1, static_cast<int>(d) - 1));
      const DensityMatrix rho = rng.DensityIn(p);
      const ComplexMatrix u = rng.Hermitian(d, 0.1 + rng.Uniform());
      const double dt = 0.001 + 0.1 * rng.Uniform();
      const double a = ErrorProbZenoReduced(rho, u, LindbladChannel(), p, dt);
      const double b = ErrorProbSecondOrder(rho, u, LindbladChannel(), p, dt);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    return std::pair{worst <= 1e-10, Fmt("max relative difference %.3g (<= 1e-10), 50 instances, H_0 = 0", worst)};
  });

  Run(5, "Entropy-step consistency", [] {
    double worst_exact = 0.0, worst_series = 0.0;
    for (int i = 0; i < 25; ++i) {
      const double dp = std::pow(10.0, -8.0 + 7.7 * i / 24.0);
      for (double m : {2.0, 3.0, 4.0, 8.0, 256.0, 65536.0}) {
        // Shannon sum; the M - 1 equal wrong outcomes are folded into one term.
        double shannon = -(1.0 - dp) * std::log1p(-dp) - dp * std::log(dp / (m - 1.0));
        worst_exact = std::max(worst_exact, std::abs(EntropyStep(dp, m, EntropyMode::kExact) - shannon));
        if (dp <= 1e-2) {
          const double diff =
              std::abs(EntropyStep(dp, m, EntropyMode::kFirstOrder) - EntropyStep(dp, m, EntropyMode::kExact));
          worst_series = std::max(worst_series, diff / (2.0 * dp * dp));
        }
      }
    }
    return std::pair{worst_exact <= 1e-12 && worst_series <= 1.0,
                     Fmt("max |exact - Shannon| %.3g (<= 1e-12); max |first - exact| / (2 dp^2) %.4f (<= 1)",
                         worst_exact, worst_series)};
  });

  Run(6, "Bound attainment ordering", [] {
    struct Case {
      int m, n;
      double g, temperature, dt;
    };
    const Case cases[] = {{2, 1, 2.0, 1.0, 0.05}, {1, 2, 4.0, 0.5, 0.1}, {1, 1, 3.0, 2.0, 0.02},
                          {1, 3, 2.0, 1.0, 0.05}, {2, 2, 2.0, 0.3, 0.1}};
    bool pass = true;
    std::string detail;
    int idx = 0;
    for (const Case& c : cases) {
      BlockSystemParams bp;
      bp.model.m = c.m;
      bp.model.n = c.n;
      bp.model.g = c.g;
      bp.model.temperature = c.temperature;
      bp.model.epsilon = 1.0;
      bp.num_valid = static_cast<int>(std::lround(std::pow(c.g, c.m)));
      bp.valid_rank = 2;
      bp.dim = bp.num_valid * bp.valid_rank;
      ZenoRunConfig cfg{.system = MakeBlockSystem(bp)};
      const double scale = HamiltonianScale(cfg.system);
      cfg.system.model.tau_c = c.dt / scale;
      cfg.dt_meas = c.dt / scale;
      cfg.dt_int = cfg.dt_meas / 10.0;
      cfg.n_cycles = 20000;
      cfg.seed = MixSeed(606, idx++);
      const ZenoRunResult r = RunZeno(cfg);
      const double bound = ZenoBoundSigma(OperationRate(cfg.system), 1.0 / cfg.dt_meas, Eta(cfg.system.model));
      const bool ok = r.sigma_dot_hat.value >= bound - 3.0 * r.sigma_dot_hat.std_error;
      pass = pass && ok;
      detail += Fmt("%.3g/%.3g ", r.sigma_dot_hat.value, bound);
    }
    return std::pair{pass, "measured/bound per config: " + detail};
  });

  Run(7, "Dissipation-delay identity", [] {
    ThermalNoiseModel model;
    model.m = 2;
    model.n = 3;
    model.g = 2.0;
    model.temperature = 0.7;
    model.epsilon = 1.3;
    const double energy = 5.0;
    const double eta = Eta(model);
    const double nu_z = MargolusLevitin(RateKind::kMeasurement, model, energy);
    const double expected = std::numbers::pi * eta / energy;
    double worst = 0.0;
    for (double nu_c : LogGrid(1e-2, 1e1, 31)) {
      const double per_op = ZenoBoundSigma(nu_c, nu_z, eta) / nu_c;
      const double delay = 1.0 / nu_c;
      worst = std::max(worst, std::abs(per_op * delay / expected - 1.0));
      worst = std::max(worst, std::abs(DissipationDelay(eta, energy) / expected - 1.0));
    }
    return std::pair{worst <= 1e-12, Fmt("max relative deviation %.3g (<= 1e-12), nu_C in [1e-2, 1e1]", worst)};
  });

  Run(8, "Allocation optimality", [] {
    RandomOps rng(808);
    double worst_grid = 0.0, worst_scale = 0.0;
    bool marginal = true;
    for (int trial = 0; trial < 6; ++trial) {
      const std::size_t n = 1 + trial % 3;
      std::vector<SubsystemProfile> prof;
      std::vector<double> etas, c_zeno, c_strong;
      for (std::size_t i = 0; i < n; ++i) {
        prof.push_back({0.2 + 3.0 * rng.Uniform(), 0.1 + 2.0 * rng.Uniform()});
        etas.push_back(prof.back().eta);
        c_zeno.push_back(prof.back().eta / prof.back().nu_z);
        c_strong.push_back(prof.back().eta);
      }
      const double budget = 0.5 + 2.0 * rng.Uniform();
      const AllocationResult z = AllocateZeno(prof, budget), s = AllocateStrong(etas, budget);
      worst_grid = std::max(worst_grid, std::abs(BruteForceTotalRate(c_zeno, budget) / z.total_rate - 1.0));
      worst_grid = std::max(worst_grid, std::abs(BruteForceTotalRate(c_strong, budget) / s.total_rate - 1.0));
      marginal = marginal && VerifyEqualMarginalCost(z, 1e-9) && VerifyEqualMarginalCost(s, 1e-9);
      const AllocationResult z4 = AllocateZeno(prof, 4.0 * budget), s4 = AllocateStrong(etas, 4.0 * budget);
      for (std::size_t i = 0; i < n; ++i) {
        worst_scale = std::max(worst_scale, std::abs(z4.rates[i] / (2.0 * z.rates[i]) - 1.0));
        worst_scale = std::max(worst_scale, std::abs(s4.rates[i] / (2.0 * s.rates[i]) - 1.0));
      }
    }
    std::string m = Fmt("grid oracle rel diff %.3g (<= 1e-4); equal marginal cost to 1e-9: ", worst_grid);
    m += marginal ? "yes" : "no";
    m += Fmt("; budget x4 rates x2 deviation %.3g (<= 1e-12)", worst_scale);
    return std::pair{worst_grid <= 1e-4 && marginal && worst_scale <= 1e-12, m};
  });

  Run(9, "CRN scaling law", [] {
    const double betas[] = {0.01, 0.02, 0.05, 0.1};
    std::vector<CrnResult> runs;
    std::uint64_t min_events = ~0ull;
    int idx = 0;
    for (double beta : betas) {
      const auto n_plus = static_cast<std::int64_t>(std::llround(500.0 * (1.0 + beta)));
      runs.push_back(ChemostatRun(n_plus, 1000 - n_plus, 20000.0, MixSeed(909, idx++)));
      min_events = std::min(min_events, runs.back().events);
    }
    const AdiabaticFit f = VerifyAdiabaticLaw(runs, 1.0, 1000.0);
    const bool pass = std::abs(f.sigma_vs_beta.exponent - 2.0) <= 0.1 && std::abs(f.nu_vs_beta.exponent - 1.0) <= 0.05 &&
                      f.law_constant_spread <= 0.10 && min_events >= 100000;
    std::string m = Fmt("sigma exponent %.4f (2 +- 0.1); nu exponent %.4f (1 +- 0.05); law-constant spread %.4f (<= 0.1)",
                        f.sigma_vs_beta.exponent, f.nu_vs_beta.exponent, f.law_constant_spread);
    m += Fmt("; law constant %.4f event-log convention, %.4f closed-form convention", f.law_constant_mean,
             2.0 * f.law_constant_mean);
    m += Fmt("; min events %.3g", static_cast<double>(min_events));
    return std::pair{pass, m};
  });

  Run(10, "CTMC formula vs event log", [] {
    const std::int64_t pairs[][2] = {{600, 400}, {700, 300}, {520, 480}};
    double worst = 0.0, formula_dev = 0.0;
    int idx = 0;
    for (const auto& pr : pairs) {
      const CrnResult r = ChemostatRun(pr[0], pr[1], 200.0, MixSeed(1010, idx++));
      const double a = r.gamma * pr[0], b = r.gamma * pr[1];
      const std::vector<double> flows{0.0, a, b, 0.0};
      const double analytic = CtmcEntropyRate(flows, 2);
      const double closed = (a - b) * std::log(a / b);
      worst = std::max(worst, std::abs(r.sigma_dot_event.value - analytic) / r.sigma_dot_event.std_error);
      formula_dev = std::max(formula_dev, std::abs(analytic / closed - 1.0));
    }
    return std::pair{worst <= 3.0 && formula_dev <= 1e-12,
                     Fmt("max |event log - (a-b) log(a/b)| = %.3f sigma (<= 3), 3 (a, b) pairs; CTMC sum vs two-state "
                         "form %.2g",
                         worst, formula_dev)};
  });

  Run(11, "Geometric laws", [] {
    std::vector<double> r, net, single, adv;
    for (double x : LogGrid(1.0, 100.0, 41)) {
      GeometryParams g;
      g.r = x;
      g.area_coeff = 4.0 * std::numbers::pi;
      g.vol_coeff = 4.0 * std::numbers::pi / 3.0;
      const GeometricRates gr = ComputeGeometricRates(g);
      r.push_back(x);
      net.push_back(gr.nu_net);
      single.push_back(gr.nu_single);
      adv.push_back(AdvantageRatio(g, std::numbers::ln2, 0.3));
    }
    const double s_net = FitPowerLaw(r, net).exponent, s_single = FitPowerLaw(r, single).exponent,
                 s_adv = FitPowerLaw(r, adv).exponent;
    const bool pass = std::abs(s_net - 2.5) <= 1e-10 && std::abs(s_single + 0.5) <= 1e-10 && std::abs(s_adv - 0.5) <= 1e-10;
    return std::pair{pass, Fmt("slopes nu_net %.12f, nu_single %.12f, advantage %.12f", s_net, s_single, s_adv)};
  });

  Run(12, "Numerical hygiene", [] {
    const ValidationReport rep = Validate();
    int failed = 0;
    for (const auto& c : rep.checks) failed += c.passed ? 0 : 1;
    const char* required[] = {"gksl.trace_drift_per_step", "linop.density_positivity",
                              "linop.entropy_unitary_invariance", "crn.bias_conservation"};
    bool present = true;
    for (const char* name : required) {
      present = present && std::any_of(rep.checks.begin(), rep.checks.end(),
                                       [&](const InvariantCheck& c) { return c.name == name && c.passed; });
    }
    return std::pair{rep.all_passed() && present,
                     Fmt("%.0f invariants, %.0f failed", static_cast<double>(rep.checks.size()), failed)};
  });

  std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ALL PASS" : "FAILURES", g_failures);
  return g_failures == 0 ? 0 : 1;
}
