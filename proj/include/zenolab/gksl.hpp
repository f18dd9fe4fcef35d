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
#ifndef ZENOLAB_GKSL_HPP_
#define ZENOLAB_GKSL_HPP_

#include <functional>
#include <vector>

#include "zenolab/linop.hpp"

namespace zenolab {

struct JumpTerm {
  double gamma = 0.0;  // rate, 1/time
  ComplexMatrix jump;
};

// Dissipator  L rho = sum_i gamma_i (L_i rho L_i^+ - 1/2 {L_i^+ L_i, rho}).
// Time independent.
class LindbladChannel {
 public:
  LindbladChannel() = default;
  explicit LindbladChannel(std::vector<JumpTerm> terms);

  bool empty() const { return terms_.empty(); }
  const std::vector<JumpTerm>& terms() const { return terms_; }
  // 0 for the empty channel, which is compatible with every dimension.
  Eigen::Index dim() const { return terms_.empty() ? 0 : terms_.front().jump.rows(); }

  // sum_i gamma_i L_i^+ L_i
  const ComplexMatrix& decay_operator() const { return decay_; }
  // sum_i gamma_i ||L_i||^2, the channel's rate scale.
  double rate_scale() const { return rate_scale_; }

  ComplexMatrix Apply(const ComplexMatrix& rho) const;

 private:
  std::vector<JumpTerm> terms_;
  ComplexMatrix decay_;
  double rate_scale_ = 0.0;
};

// H(t) = h0 + U(t). An empty u_of_t means U = 0. When hold_interval > 0 the
// potential is piecewise constant on [k*hold, (k+1)*hold) and the integrator
// never lets a step straddle a piece boundary.
struct HamiltonianSpec {
  ComplexMatrix h0;
  std::function<ComplexMatrix(double)> u_of_t;
  double hold_interval = 0.0;
};

// rho' = i[rho, H] + L rho. The sign of the commutator follows the ordering
// i[rho, H] literally (identical to -i[H, rho]).
ComplexMatrix LindbladRhs(const DensityMatrix& rho, const ComplexMatrix& h, const LindbladChannel& channel);

// Classical RK4 integration of LindbladRhs from t_start to t_start + t_final.
// Requires dt_int * ||H|| <= 0.1 throughout. The result is renormalized to
// unit trace; eigenvalues below -1e-6 are reported as a numerical failure.
DensityMatrix Evolve(const DensityMatrix& rho0, const HamiltonianSpec& spec, const LindbladChannel& channel,
                     double t_final, double dt_int, double t_start = 0.0);

// Second-order short-time error probability for rho inside range(p):
//   dp = tr[P^perp (dt L rho + dt^2 (H rho H + i/2 [L rho, H] + 1/2 d/dt L rho))]
// with d/dt L rho = L(rho') for the time-independent channel. Values in
// [-1e-12, 0) are clamped to 0; larger negative values (dt far outside the
// expansion's range) are returned unchanged.
double ErrorProbSecondOrder(const DensityMatrix& rho, const ComplexMatrix& h, const LindbladChannel& channel,
                            const Projector& p, double dt);

// Reduced form that keeps only the couplings out of the valid subspace:
//   dp = dt^2 tr[rho_00 (V_u^+ V_u + sum_i (gamma_i/dt) V_i^+ V_i)]
// where V = P^perp X P is the valid -> invalid block of X. Depends on u and
// the jumps only; the ballistic Hamiltonian does not enter.
double ErrorProbZenoReduced(const DensityMatrix& rho, const ComplexMatrix& u, const LindbladChannel& channel,
                            const Projector& p, double dt);

struct MeasurementOutcome {
  double delta_p = 0.0;      // tr[P^perp rho(dt)]
  DensityMatrix post_valid;  // P rho P / tr(P rho P)
};

MeasurementOutcome MeasureAfterEvolve(const DensityMatrix& rho0, const HamiltonianSpec& spec,
                                      const LindbladChannel& channel, const Projector& p, double dt, double dt_int);

namespace detail {

struct EvolveStats {
  int steps = 0;
  double max_generator_norm = 0.0;
};

// Integrates rho in place; no renormalization or positivity check. rho must
// be Hermitian on entry (the kernel uses that to halve the products).
EvolveStats EvolveInPlace(ComplexMatrix& rho, const HamiltonianSpec& spec, const LindbladChannel& channel,
                          double t_start, double duration, double dt_int);

// Trace correction, Hermitian symmetrization and positivity handling shared
// by every routine that hands a state back to the caller.
DensityMatrix FinalizeState(ComplexMatrix rho, double allowed_trace_drift);

}  // namespace detail

}  // namespace zenolab

#endif  // ZENOLAB_GKSL_HPP_
