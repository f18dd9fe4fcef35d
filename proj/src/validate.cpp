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

#include "zenolab/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "zenolab/composite.hpp"
#include "zenolab/crn.hpp"
#include "zenolab/error.hpp"
#include "zenolab/fit.hpp"
#include "zenolab/gksl.hpp"
#include "zenolab/random_ops.hpp"
#include "zenolab/scalecalc.hpp"
#include "zenolab/zeno.hpp"

namespace zenolab {

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.passed; });
}

namespace {

class Reporter {
 public:
  explicit Reporter(ValidationReport& report) : report_(report) {}

  // measured <= threshold
  void AtMost(const std::string& name, double measured, double threshold, const std::string& detail = {}) {
    report_.checks.push_back({name, measured <= threshold, measured, threshold, detail});
  }
  // measured >= threshold
  void AtLeast(const std::string& name, double measured, double threshold, const std::string& detail = {}) {
    report_.checks.push_back({name, measured >= threshold, measured, threshold, detail});
  }
  void Flag(const std::string& name, bool ok, const std::string& detail = {}) {
    report_.checks.push_back({name, ok, ok ? 1.0 : 0.0, 1.0, detail});
  }
  // Runs body; an exception becomes a failed check carrying its message.
  void Guarded(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      report_.checks.push_back({name, false, 0.0, 0.0, std::string("exception: ") + e.what()});
    }
  }

 private:
  ValidationReport& report_;
};

LindbladChannel RandomChannel(RandomOps& rng, Eigen::Index d, int terms, double scale) {
  std::vector<JumpTerm> jumps;
  for (int k = 0; k < terms; ++k) jumps.push_back({0.1 + 0.9 * rng.Uniform(), scale * rng.Ginibre(d, d)});
  return LindbladChannel(std::move(jumps));
}

ZenoSystem PresetZeno(double temperature) {
  BlockSystemParams bp;
  bp.model.m = 2;
  bp.model.n = 1;
  bp.model.g = 2.0;
  bp.model.temperature = temperature;
  bp.model.epsilon = 1.0;
  ZenoSystem sys = MakeBlockSystem(bp);
  sys.model.tau_c = 0.1 / HamiltonianScale(sys);
  return sys;
}

void CheckLinop(Reporter& rep, RandomOps& rng, const ValidateOptions& options) {
  rep.Guarded("linop.density_invariants", [&] {
    double trace_err = 0.0, herm = 0.0, min_ev = 1.0;
    std::vector<ComplexMatrix> states;
    for (int i = 0; i < 20; ++i) {
      const Eigen::Index d = rng.Int(2, 8);
      const DensityMatrix rho0 = rng.Density(d);
      HamiltonianSpec spec{rng.Hermitian(d, 0.5), {}, 0.0};
      const LindbladChannel ch = RandomChannel(rng, d, 2, 0.3);
      const double dt = std::min(0.01, 0.05 / HermitianNorm(spec.h0));
      states.push_back(Evolve(rho0, spec, ch, 1.0, dt).mat());
    }
    if (options.inject_trace_fault) states.push_back(DensityMatrix::Unchecked(ComplexMatrix::Identity(2, 2) * 0.55).mat());
    for (const auto& s : states) {
      const DensityDiagnostics dg = Diagnose(s);
      trace_err = std::max(trace_err, dg.trace_error);
      herm = std::max(herm, dg.hermiticity);
      min_ev = std::min(min_ev, dg.min_eigenvalue);
    }
    const std::string detail = options.inject_trace_fault ? "includes injected trace-1.1 state" : "";
    rep.AtMost("linop.density_trace", trace_err, 1e-9, detail);
    rep.AtMost("linop.density_hermiticity", herm, 1e-9, detail);
    rep.AtLeast("linop.density_positivity", min_ev, -1e-8, detail);
  });

  rep.Guarded("linop.partition_residuals", [&] {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const ComplexMatrix u = rng.Unitary(6);
      std::vector<Projector> ps{Projector::OntoColumns(u.middleCols(0, 2)), Projector::OntoColumns(u.middleCols(2, 2)),
                                Projector::OntoColumns(u.middleCols(4, 1))};
      const ProjectorPartition part = ProjectorPartition::FromComputational(std::move(ps));
      worst = std::max({worst, part.orthogonality_residual(), part.completeness_residual()});
    }
    rep.AtMost("linop.partition_residuals", worst, 1e-10);
  });

  rep.Guarded("linop.entropy_unitary_invariance", [&] {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Eigen::Index d = rng.Int(2, 8);
      const DensityMatrix rho = rng.Density(d);
      const ComplexMatrix v = rng.Unitary(d);
      ComplexMatrix rotated = v * rho.mat() * v.adjoint();
      rotated = 0.5 * (rotated + rotated.adjoint()).eval();
      worst = std::max(worst, std::abs(VonNeumannEntropy(DensityMatrix(rotated)) - VonNeumannEntropy(rho)));
    }
    rep.AtMost("linop.entropy_unitary_invariance", worst, 1e-9);
  });
}

void CheckGksl(Reporter& rep, RandomOps& rng) {
  rep.Guarded("gksl.rhs_traceless", [&] {
    double worst = 0.0, worst_herm = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Eigen::Index d = rng.Int(2, 16);
      const ComplexMatrix out = LindbladRhs(rng.Density(d), rng.Hermitian(d), RandomChannel(rng, d, rng.Int(0, 3), 1.0));
      worst = std::max(worst, std::abs(out.trace()));
      worst_herm = std::max(worst_herm, HermiticityResidual(out));
    }
    rep.AtMost("gksl.rhs_traceless", worst, 1e-12, "100 instances, dims 2-16");
    rep.AtMost("gksl.rhs_hermitian", worst_herm, 1e-12);
  });

  rep.Guarded("gksl.trace_drift_per_step", [&] {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Eigen::Index d = rng.Int(2, 8);
      ComplexMatrix rho = rng.Density(d).mat();
      HamiltonianSpec spec{rng.Hermitian(d), {}, 0.0};
      const double dt = 0.05 / HermitianNorm(spec.h0);
      const auto stats = detail::EvolveInPlace(rho, spec, RandomChannel(rng, d, 2, 0.5), 0.0, 200 * dt, dt);
      worst = std::max(worst, std::abs(rho.trace() - Complex(1.0, 0.0)) / stats.steps);
    }
    rep.AtMost("gksl.trace_drift_per_step", worst, 1e-9);
  });

  rep.Guarded("gksl.second_order_dt2_slope", [&] {
    const ComplexMatrix u = rng.Unitary(6);
    const Projector p = Projector::OntoColumns(u.leftCols(2));
    const DensityMatrix rho = rng.DensityIn(p);
    const ComplexMatrix h = rng.Hermitian(6);
    const double scale = HermitianNorm(h);
    std::vector<double> dts, dps;
    for (double f : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) {
      dts.push_back(f / scale);
      dps.push_back(ErrorProbSecondOrder(rho, h, LindbladChannel(), p, f / scale));
    }
    rep.AtMost("gksl.second_order_dt2_slope", std::abs(FitPowerLaw(dts, dps).exponent - 2.0), 0.05,
               "|slope - 2| over dt in [1e-3, 1e-1]/||H||");
  });

  rep.Guarded("gksl.first_order_coefficient", [&] {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Eigen::Index d = rng.Int(3, 8);
      const Projector p = rng.RandomProjector(d, rng.Int(1, static_cast<int>(d) - 1));
      const DensityMatrix rho = rng.DensityIn(p);
      const ComplexMatrix h = rng.Hermitian(d);
      const LindbladChannel ch = RandomChannel(rng, d, 2, 0.5);
      const double dt = 1e-3;
      const double linear = (4.0 * ErrorProbSecondOrder(rho, h, ch, p, 0.5 * dt) - ErrorProbSecondOrder(rho, h, ch, p, dt)) / dt;
      const ComplexMatrix perp = ComplexMatrix::Identity(d, d) - p.mat();
      ComplexMatrix op = ComplexMatrix::Zero(d, d);
      for (const auto& t : ch.terms()) op += t.gamma * t.jump.adjoint() * perp * t.jump;
      const double expected = Expectation(rho, op).real();
      worst = std::max(worst, std::abs(linear - expected) / expected);
    }
    rep.AtMost("gksl.first_order_coefficient", worst, 1e-9, "relative error of the extracted linear term");
  });

  rep.Guarded("gksl.zeno_reduced_identity", [&] {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Eigen::Index d = rng.Int(2, 8);
      const Projector p = rng.RandomProjector(d, rng.Int(1, static_cast<int>(d) - 1));
      const DensityMatrix rho = rng.DensityIn(p);
      const ComplexMatrix uop = rng.Hermitian(d);
      const double dt = 0.01 + 0.1 * rng.Uniform();
      const double a = ErrorProbZenoReduced(rho, uop, LindbladChannel(), p, dt);
      const double b = ErrorProbSecondOrder(rho, uop, LindbladChannel(), p, dt);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    rep.AtMost("gksl.zeno_reduced_identity", worst, 1e-10, "H_0 = 0, empty channel");
  });
}

void CheckZeno(Reporter& rep) {
  rep.Guarded("zeno.entropy_step_grid", [&] {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double dp = std::pow(10.0, -6.0 + 5.7 * i / 19.0);
      for (double m : {2.0, 3.0, 4.0, 16.0, 1024.0}) {
        // Shannon entropy of (1 - dp, dp/(M-1) x (M-1)).
        double shannon = -(1.0 - dp) * std::log(1.0 - dp);
        if (m > 2.0) {
          const double each = dp / (m - 1.0);
          shannon -= (m - 1.0) * each * std::log(each);
        } else {
          shannon -= dp * std::log(dp);
        }
        worst = std::max(worst, std::abs(EntropyStep(dp, m, EntropyMode::kExact) - shannon));
      }
    }
    rep.AtMost("zeno.entropy_step_grid", worst, 1e-12, "20 x 5 grid");
  });

  rep.Guarded("zeno.entropy_step_series", [&] {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double dp = std::pow(10.0, -6.0 + 4.0 * i / 49.0);
      for (double m : {2.0, 4.0, 1024.0}) {
        const double diff = std::abs(EntropyStep(dp, m, EntropyMode::kFirstOrder) - EntropyStep(dp, m, EntropyMode::kExact));
        worst = std::max(worst, diff / (2.0 * dp * dp));
      }
    }
    rep.AtMost("zeno.entropy_step_series", worst, 1.0, "|first - exact| / (2 dp^2)");
  });

  rep.Guarded("zeno.quadratic_suppression", [&] {
    const ZenoSystem sys = PresetZeno(1.0);
    const double scale = HamiltonianScale(sys);
    ZenoRunConfig cfg{.system = sys};
    cfg.n_cycles = 4000;
    cfg.seed = 11;
    cfg.dt_meas = 0.04 / scale;
    cfg.dt_int = cfg.dt_meas / 10.0;
    const double full = RunZeno(cfg).delta_p_mean.value;
    cfg.dt_meas *= 0.5;
    cfg.dt_int *= 0.5;
    const double half = RunZeno(cfg).delta_p_mean.value;
    const double ratio = half / full;
    rep.Flag("zeno.quadratic_suppression", ratio >= 0.15 && ratio <= 0.35,
             "dp(dt/2)/dp(dt) = " + std::to_string(ratio) + ", expected in [0.15, 0.35]");
  });

  rep.Guarded("zeno.entropy_additivity", [&] {
    const ZenoSystem sys = PresetZeno(1.0);
    const double scale = HamiltonianScale(sys);
    ZenoRunConfig cfg{.system = sys};
    cfg.seed = 5;
    cfg.dt_meas = 0.1 / scale;
    cfg.dt_int = cfg.dt_meas / 10.0;
    cfg.n_cycles = 600;
    const ZenoRunResult whole = RunZeno(cfg);
    cfg.n_cycles = 300;
    const ZenoRunResult first = RunZeno(cfg);
    cfg.start_cycle = 300;
    cfg.initial_state = first.final_state;
    cfg.initial_projector = first.final_projector;
    const ZenoRunResult second = RunZeno(cfg);
    const double diff = std::abs(whole.total_entropy - first.total_entropy - second.total_entropy);
    rep.AtMost("zeno.entropy_additivity", diff, 1e-12 * std::max(1.0, whole.total_entropy));
    rep.AtLeast("zeno.entropy_nonnegative", std::min({whole.total_entropy, first.total_entropy, second.total_entropy}), 0.0);
  });

  rep.Guarded("zeno.bound_ordering", [&] {
    const ZenoSystem sys = PresetZeno(1.0);
    const double scale = HamiltonianScale(sys);
    ZenoRunConfig cfg{.system = sys};
    cfg.seed = 3;
    cfg.dt_meas = 0.05 / scale;
    cfg.dt_int = cfg.dt_meas / 10.0;
    cfg.n_cycles = 4000;
    const ZenoRunResult r = RunZeno(cfg);
    const double bound = ZenoBoundSigma(OperationRate(sys), 1.0 / cfg.dt_meas, Eta(sys.model));
    const double slack = 1.0 - 3.0 * r.sigma_dot_hat.std_error / r.sigma_dot_hat.value;
    rep.AtLeast("zeno.bound_ordering", r.sigma_dot_hat.value, bound * slack, "measured Sigma rate vs closed-form bound");
  });
}

void CheckComposite(Reporter& rep, RandomOps& rng) {
  rep.Guarded("composite.optimality", [&] {
    std::vector<SubsystemProfile> prof;
    for (int i = 0; i < 5; ++i) prof.push_back({0.5 + 2.0 * rng.Uniform(), 0.2 + rng.Uniform()});
    const double budget = 1.7;
    const AllocationResult best = AllocateZeno(prof, budget);
    double worst_gain = -1.0;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> dir(prof.size());
      double gdot = 0.0, gg = 0.0;
      std::vector<double> grad(prof.size());
      for (std::size_t i = 0; i < prof.size(); ++i) {
        dir[i] = rng.Normal();
        grad[i] = 2.0 * best.rates[i] * prof[i].eta / prof[i].nu_z;
        gdot += grad[i] * dir[i];
        gg += grad[i] * grad[i];
      }
      double sigma = 0.0;
      std::vector<double> trial_rates(prof.size());
      for (std::size_t i = 0; i < prof.size(); ++i) {
        dir[i] -= gdot / gg * grad[i];
        trial_rates[i] = std::max(0.0, best.rates[i] + 1e-2 * best.rates[i] * dir[i]);
        sigma += SubsystemSigma(CostModel::kZeno, prof[i], trial_rates[i]);
      }
      const double rescale = std::sqrt(budget / sigma);
      double total = 0.0;
      for (double r : trial_rates) total += r * rescale;
      worst_gain = std::max(worst_gain, (total - best.total_rate) / best.total_rate);
    }
    rep.AtMost("composite.optimality", worst_gain, 1e-8, "best relative gain over 100 budget-preserving perturbations");
  });

  rep.Guarded("composite.scale_covariance", [&] {
    const std::vector<SubsystemProfile> prof{{1.0, 0.5}, {2.0, 1.5}, {0.3, 0.7}};
    const AllocationResult a = AllocateZeno(prof, 1.0);
    const AllocationResult b = AllocateZeno(prof, 4.0);
    const std::vector<double> etas{0.5, 1.5, 0.7};
    const AllocationResult c = AllocateStrong(etas, 1.0);
    const AllocationResult e = AllocateStrong(etas, 4.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < prof.size(); ++i) {
      worst = std::max(worst, std::abs(b.rates[i] / (2.0 * a.rates[i]) - 1.0));
      worst = std::max(worst, std::abs(e.rates[i] / (2.0 * c.rates[i]) - 1.0));
    }
    rep.AtMost("composite.scale_covariance", worst, 1e-12);
    rep.Flag("composite.equal_marginal_cost", VerifyEqualMarginalCost(a) && VerifyEqualMarginalCost(c));
  });

  rep.Guarded("composite.single_system_bound", [&] {
    const std::vector<SubsystemProfile> prof(4, {2.0, 0.8});
    const AllocationResult a = AllocateZeno(prof, 3.0);
    const double nu_z_total = 4 * 2.0;
    const double reproduced = a.total_rate * a.total_rate * 0.8 / nu_z_total;
    rep.AtMost("composite.single_system_bound", std::abs(reproduced / a.total_sigma - 1.0), 1e-12);
  });
}

void CheckCrn(Reporter& rep, RandomOps& rng) {
  rep.Guarded("crn.bias_conservation", [&] {
    CrnConfig cfg;
    cfg.n_plus = 180;
    cfg.n_minus = 20;
    cfg.n_tokens = 5;
    cfg.k = 0.2;
    cfg.chemostat = false;
    cfg.t_final = 100.0;
    cfg.seed = 9;
    const CrnResult r = RunGillespie(cfg);
    rep.Flag("crn.bias_conservation", r.bias_conserved, std::to_string(r.events) + " events, closed mode");
    const double z = std::abs(r.mean_wait.value - r.expected_wait) / r.mean_wait.std_error;
    rep.AtMost("crn.waiting_time", z, 3.0, "|mean wait - 1/a0| in standard errors");
  });

  rep.Guarded("crn.ctmc_nonnegative", [&] {
    double min_sigma = 0.0, balanced = 0.0;
    for (int i = 0; i < 50; ++i) {
      const int n = rng.Int(2, 5);
      std::vector<double> flows(n * n, 0.0), sym(n * n, 0.0);
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          flows[a * n + b] = 0.1 + rng.Uniform();
          flows[b * n + a] = 0.1 + rng.Uniform();
          sym[a * n + b] = sym[b * n + a] = 0.1 + rng.Uniform();
        }
      }
      min_sigma = std::min(min_sigma, CtmcEntropyRate(flows, n));
      balanced = std::max(balanced, CtmcEntropyRate(sym, n));
    }
    rep.AtLeast("crn.ctmc_nonnegative", min_sigma, 0.0);
    rep.AtMost("crn.ctmc_detailed_balance_zero", balanced, 0.0);
  });

  rep.Guarded("crn.event_log_vs_analytic", [&] {
    double worst = 0.0;
    for (double beta : {0.01, 0.05}) {
      CrnConfig cfg;
      cfg.n_plus = static_cast<std::int64_t>(std::llround(500.0 * (1.0 + beta)));
      cfg.n_minus = 1000 - cfg.n_plus;
      cfg.n_tokens = 10;
      cfg.k = 0.1;
      cfg.t_final = 2000.0;
      cfg.seed = 21;
      const CrnResult r = RunGillespie(cfg);
      const double expected = AnalyticBiasEntropyRate(r.gamma, beta, 1000.0, EntropyConvention::kEventLog);
      worst = std::max(worst, std::abs(r.sigma_dot_event.value - expected) / r.sigma_dot_event.std_error);
    }
    rep.AtMost("crn.event_log_vs_analytic", worst, 3.0, "deviation in standard errors, beta in {0.01, 0.05}");
  });
}

void CheckScalecalc(Reporter& rep) {
  rep.Guarded("scalecalc.power_law_slopes", [&] {
    std::vector<double> r, net, single, adv;
    bool monotone = true;
    for (int i = 0; i <= 20; ++i) {
      GeometryParams g;
      g.r = std::pow(100.0, i / 20.0);
      const GeometricRates rates = ComputeGeometricRates(g);
      if (!net.empty() && (rates.nu_net <= net.back() || rates.nu_single >= single.back())) monotone = false;
      r.push_back(g.r);
      net.push_back(rates.nu_net);
      single.push_back(rates.nu_single);
      adv.push_back(AdvantageRatio(g, std::log(2.0), 1.0));
    }
    rep.AtMost("scalecalc.net_slope", std::abs(FitPowerLaw(r, net).exponent - 2.5), 1e-10);
    rep.AtMost("scalecalc.single_slope", std::abs(FitPowerLaw(r, single).exponent + 0.5), 1e-10);
    rep.AtMost("scalecalc.advantage_slope", std::abs(FitPowerLaw(r, adv).exponent - 0.5), 1e-10);
    rep.Flag("scalecalc.monotone", monotone);
  });
}

}  // namespace

ValidationReport Validate(const ValidateOptions& options) {
  ValidationReport report;
  Reporter rep(report);
  RandomOps rng(options.seed);
  CheckLinop(rep, rng, options);
  CheckGksl(rep, rng);
  CheckZeno(rep);
  CheckComposite(rep, rng);
  CheckCrn(rep, rng);
  CheckScalecalc(rep);
  report.notes = CrnConventionNote();
  return report;
}

}  // namespace zenolab
