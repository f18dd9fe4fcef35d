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
#include "zenolab/gksl.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zenolab/error.hpp"

namespace zenolab {

namespace {

constexpr Complex kI(0.0, 1.0);
constexpr double kStabilityGuard = 0.1;
constexpr double kNegativeEigenFailure = -1e-6;
constexpr double kValidSubspaceTol = 1e-9;
constexpr double kClampWindow = 1e-12;

void RequireHermitianOperator(const ComplexMatrix& h, const char* what) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  Require(h.rows() == h.cols() && HermiticityResidual(h) <= kHermitianTol * scale, ErrorCode::kInvalidArgument,
          std::string(what) + " is not Hermitian");
}

void RequireChannelDim(const LindbladChannel& channel, Eigen::Index dim) {
  Require(channel.empty() || channel.dim() == dim, ErrorCode::kDimensionMismatch,
          "channel dimension does not match the state");
}

void RequireInRange(const DensityMatrix& rho, const Projector& p) {
  Require(p.dim() == rho.dim(), ErrorCode::kDimensionMismatch, "projector dimension does not match the state");
  const double residual = (p.mat() * rho.mat() - rho.mat()).cwiseAbs().maxCoeff();
  Require(residual <= kValidSubspaceTol, ErrorCode::kInvalidArgument, "state is not inside the valid subspace");
}

// tr[C^+ X C] for the complement basis C of p, i.e. tr[P^perp X].
double ComplementTrace(const ComplexMatrix& x, const Projector& p) {
  const ComplexMatrix& c = p.complement_basis();
  if (c.cols() == 0) return 0.0;
  return (c.adjoint() * x * c).trace().real();
}

// Workspace for the Hermitian-input right-hand side. Sized once per integration.
struct RhsKernel {
  const LindbladChannel& channel;
  ComplexMatrix x, y;

  RhsKernel(const LindbladChannel& ch, Eigen::Index d) : channel(ch), x(d, d), y(d, d) {}

  // out = i[rho, h] + L rho, assuming rho and h Hermitian so that
  // h rho = (rho h)^+ and rho K = (K rho)^+.
  void operator()(const ComplexMatrix& rho, const ComplexMatrix& h, ComplexMatrix& out) {
    x.noalias() = rho * h;
    out = x - x.adjoint();
    out *= kI;
    if (channel.empty()) return;
    for (const auto& term : channel.terms()) {
      y.noalias() = term.jump * rho;
      out.noalias() += term.gamma * (y * term.jump.adjoint());
    }
    y.noalias() = channel.decay_operator() * rho;
    out -= 0.5 * y;
    out -= 0.5 * y.adjoint();
  }
};

}  // namespace

LindbladChannel::LindbladChannel(std::vector<JumpTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) return;
  const Eigen::Index d = terms_.front().jump.rows();
  decay_ = ComplexMatrix::Zero(d, d);
  for (const auto& t : terms_) {
    Require(t.jump.rows() == d && t.jump.cols() == d, ErrorCode::kDimensionMismatch,
            "jump operators must share one square dimension");
    Require(std::isfinite(t.gamma) && t.gamma >= 0.0, ErrorCode::kInvalidArgument, "jump strength must be >= 0");
    Require(t.jump.allFinite(), ErrorCode::kInvalidArgument, "jump operator has non-finite entries");
    decay_.noalias() += t.gamma * (t.jump.adjoint() * t.jump);
    const double norm = Eigen::JacobiSVD<ComplexMatrix>(t.jump).singularValues()(0);
    rate_scale_ += t.gamma * norm * norm;
  }
}

ComplexMatrix LindbladChannel::Apply(const ComplexMatrix& rho) const {
  if (terms_.empty()) return ComplexMatrix::Zero(rho.rows(), rho.cols());
  Require(rho.rows() == dim() && rho.cols() == dim(), ErrorCode::kDimensionMismatch,
          "channel dimension does not match the operand");
  ComplexMatrix out = -0.5 * (decay_ * rho + rho * decay_);
  for (const auto& t : terms_) out.noalias() += t.gamma * (t.jump * rho * t.jump.adjoint());
  return out;
}

ComplexMatrix LindbladRhs(const DensityMatrix& rho, const ComplexMatrix& h, const LindbladChannel& channel) {
  Require(h.rows() == rho.dim() && h.cols() == rho.dim(), ErrorCode::kDimensionMismatch,
          "Hamiltonian dimension does not match the state");
  RequireHermitianOperator(h, "Hamiltonian");
  RequireChannelDim(channel, rho.dim());
  const ComplexMatrix& r = rho.mat();
  return kI * (r * h - h * r) + channel.Apply(r);
}

namespace detail {

EvolveStats EvolveInPlace(ComplexMatrix& rho, const HamiltonianSpec& spec, const LindbladChannel& channel,
                          double t_start, double duration, double dt_int) {
  const Eigen::Index d = rho.rows();
  Require(spec.h0.rows() == d && spec.h0.cols() == d, ErrorCode::kDimensionMismatch,
          "Hamiltonian dimension does not match the state");
  RequireChannelDim(channel, d);
  Require(dt_int > 0.0 && std::isfinite(dt_int), ErrorCode::kInvalidArgument, "integration step must be positive");
  Require(duration >= 0.0, ErrorCode::kInvalidArgument, "evolution time must be nonnegative");

  EvolveStats stats;
  if (duration == 0.0) return stats;

  RhsKernel rhs(channel, d);
  ComplexMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), stage(d, d);
  ComplexMatrix h_a(d, d), h_b(d, d), h_c(d, d);

  auto hamiltonian_at = [&](double t, ComplexMatrix& out) {
    out = spec.h0;
    if (spec.u_of_t) {
      const ComplexMatrix u = spec.u_of_t(t);
      Require(u.rows() == d && u.cols() == d, ErrorCode::kDimensionMismatch, "thermal potential has wrong dimension");
      out += u;
    }
  };
  auto guard = [&](const ComplexMatrix& h) {
    // The max row sum bounds the spectral norm of a Hermitian matrix; only
    // fall back to the eigenvalues when the cheap bound is inconclusive.
    double norm = h.cwiseAbs().rowwise().sum().maxCoeff();
    if (dt_int * norm > kStabilityGuard) norm = HermitianNorm(h);
    stats.max_generator_norm = std::max(stats.max_generator_norm, norm);
    if (dt_int * norm > kStabilityGuard) {
      std::ostringstream os;
      os << "stability guard violated: dt_int * ||H|| = " << dt_int * norm << " > " << kStabilityGuard;
      Fail(ErrorCode::kNumerical, os.str());
    }
  };
  auto rk4_step = [&](const ComplexMatrix& ha, const ComplexMatrix& hb, const ComplexMatrix& hc, double h) {
    rhs(rho, ha, k1);
    stage = rho + (0.5 * h) * k1;
    rhs(stage, hb, k2);
    stage = rho + (0.5 * h) * k2;
    rhs(stage, hb, k3);
    stage = rho + h * k3;
    rhs(stage, hc, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    ++stats.steps;
  };

  const double t_end = t_start + duration;
  RequireHermitianOperator(spec.h0, "h0");

  if (spec.u_of_t && spec.hold_interval > 0.0) {
    // Piecewise-constant potential: integrate each constant segment separately.
    const double hold = spec.hold_interval;
    const double snap = 1e-9 * hold;
    double t = t_start;
    while (t < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
      double k = std::floor(t / hold);
      if ((k + 1.0) * hold - t <= snap) k += 1.0;  // t sits on a boundary up to round-off
      const double seg_end = std::min(t_end, (k + 1.0) * hold);
      const double len = seg_end - t;
      if (len <= snap) {
        t = seg_end;
        continue;
      }
      hamiltonian_at(t + 0.5 * len, h_a);
      RequireHermitianOperator(h_a, "Hamiltonian");
      guard(h_a);
      const int n = std::max(1, static_cast<int>(std::ceil(len / dt_int - 1e-9)));
      const double h = len / n;
      for (int s = 0; s < n; ++s) rk4_step(h_a, h_a, h_a, h);
      t = seg_end;
    }
    return stats;
  }

  const int n = std::max(1, static_cast<int>(std::ceil(duration / dt_int - 1e-9)));
  const double h = duration / n;
  if (!spec.u_of_t) {
    guard(spec.h0);
    for (int s = 0; s < n; ++s) rk4_step(spec.h0, spec.h0, spec.h0, h);
    return stats;
  }
  for (int s = 0; s < n; ++s) {
    const double t = t_start + s * h;
    hamiltonian_at(t, h_a);
    hamiltonian_at(t + 0.5 * h, h_b);
    hamiltonian_at(t + h, h_c);
    guard(h_a);
    rk4_step(h_a, h_b, h_c, h);
  }
  return stats;
}

DensityMatrix FinalizeState(ComplexMatrix rho, double allowed_trace_drift) {
  const double drift = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (drift > allowed_trace_drift) {
    std::ostringstream os;
    os << "trace drift " << drift << " exceeds " << allowed_trace_drift;
    Fail(ErrorCode::kNumerical, os.str());
  }
  ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
  sym /= sym.trace().real();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  const double min_ev = solver.eigenvalues()(0);
  if (min_ev < kNegativeEigenFailure) {
    std::ostringstream os;
    os << "positivity violated (min eigenvalue " << min_ev << "); integration step too coarse";
    Fail(ErrorCode::kNumerical, os.str());
  }
  if (min_ev < -kPositivityTol) {
    Eigen::VectorXd ev = solver.eigenvalues().cwiseMax(0.0);
    ev /= ev.sum();
    sym = solver.eigenvectors() * ev.asDiagonal() * solver.eigenvectors().adjoint();
  }
  return DensityMatrix(std::move(sym));
}

}  // namespace detail

DensityMatrix Evolve(const DensityMatrix& rho0, const HamiltonianSpec& spec, const LindbladChannel& channel,
                     double t_final, double dt_int, double t_start) {
  Require(t_final >= 0.0 && std::isfinite(t_final), ErrorCode::kInvalidArgument, "t_final must be nonnegative");
  Require(dt_int > 0.0, ErrorCode::kInvalidArgument, "dt_int must be positive");
  Require(t_final == 0.0 || dt_int <= t_final * (1.0 + 1e-12), ErrorCode::kInvalidArgument,
          "dt_int must not exceed t_final");
  if (t_final == 0.0) return rho0;
  ComplexMatrix rho = rho0.mat();
  detail::EvolveInPlace(rho, spec, channel, t_start, t_final, dt_int);
  return detail::FinalizeState(std::move(rho), 1e-9 * std::max(1.0, t_final / dt_int));
}

double ErrorProbSecondOrder(const DensityMatrix& rho, const ComplexMatrix& h, const LindbladChannel& channel,
                            const Projector& p, double dt) {
  RequireInRange(rho, p);
  Require(h.rows() == rho.dim() && h.cols() == rho.dim(), ErrorCode::kDimensionMismatch,
          "Hamiltonian dimension does not match the state");
  RequireHermitianOperator(h, "Hamiltonian");
  RequireChannelDim(channel, rho.dim());
  const ComplexMatrix& r = rho.mat();
  const ComplexMatrix l_rho = channel.Apply(r);
  const ComplexMatrix rho_dot = kI * (r * h - h * r) + l_rho;
  const ComplexMatrix second = h * r * h + (0.5 * kI) * (l_rho * h - h * l_rho) + 0.5 * channel.Apply(rho_dot);
  double dp = dt * ComplementTrace(l_rho, p) + dt * dt * ComplementTrace(second, p);
  if (dp < 0.0 && dp >= -kClampWindow) dp = 0.0;
  return dp;
}

double ErrorProbZenoReduced(const DensityMatrix& rho, const ComplexMatrix& u, const LindbladChannel& channel,
                            const Projector& p, double dt) {
  RequireInRange(rho, p);
  Require(dt > 0.0, ErrorCode::kInvalidArgument, "dt must be positive");
  Require(u.rows() == rho.dim() && u.cols() == rho.dim(), ErrorCode::kDimensionMismatch,
          "potential dimension does not match the state");
  RequireHermitianOperator(u, "thermal potential");
  RequireChannelDim(channel, rho.dim());
  const ComplexMatrix& b = p.range_basis();
  const ComplexMatrix& c = p.complement_basis();
  if (c.cols() == 0) return 0.0;
  const ComplexMatrix rho00 = b.adjoint() * rho.mat() * b;
  const ComplexMatrix vu = c.adjoint() * u * b;
  ComplexMatrix coupling = vu.adjoint() * vu;
  for (const auto& term : channel.terms()) {
    const ComplexMatrix vl = c.adjoint() * term.jump * b;
    coupling += (term.gamma / dt) * (vl.adjoint() * vl);
  }
  const double dp = dt * dt * TraceProduct(rho00, coupling).real();
  return std::max(dp, 0.0);
}

MeasurementOutcome MeasureAfterEvolve(const DensityMatrix& rho0, const HamiltonianSpec& spec,
                                      const LindbladChannel& channel, const Projector& p, double dt, double dt_int) {
  Require(p.dim() == rho0.dim(), ErrorCode::kDimensionMismatch, "projector dimension does not match the state");
  const DensityMatrix rho = Evolve(rho0, spec, channel, dt, dt == 0.0 ? 1.0 : dt_int);
  const ComplexMatrix& b = p.range_basis();
  const ComplexMatrix inner = b.adjoint() * rho.mat() * b;
  const double kept = inner.trace().real();
  Require(kept >= 1e-12, ErrorCode::kModelViolation, "state escaped the valid subspace entirely");
  MeasurementOutcome out{ComplementTrace(rho.mat(), p),
                         DensityMatrix(b * inner * b.adjoint() / kept)};
  return out;
}

}  // namespace zenolab
