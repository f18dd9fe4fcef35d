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

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "zenolab/error.hpp"
#include "zenolab/gksl.hpp"
#include "zenolab/random_ops.hpp"

using namespace zenolab;

namespace {

// exp(-i H t) from an eigendecomposition.
ComplexMatrix Propagator(const ComplexMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const Eigen::VectorXcd phases = (es.eigenvalues().cast<Complex>() * Complex(0.0, -t)).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix Lowering() {
  ComplexMatrix l = ComplexMatrix::Zero(2, 2);
  l(0, 1) = 1.0;  // |0><1|
  return l;
}

}  // namespace

TEST_CASE("amplitude damping generator and solution") {
  const double gamma = 0.7;
  const LindbladChannel ch({{gamma, Lowering()}});
  const DensityMatrix excited = DensityMatrix::Pure(2, 1);
  const ComplexMatrix rhs = LindbladRhs(excited, ComplexMatrix::Zero(2, 2), ch);
  CHECK(rhs(1, 1).real() == doctest::Approx(-gamma));
  CHECK(rhs(0, 0).real() == doctest::Approx(gamma));

  const DensityMatrix out = Evolve(excited, {ComplexMatrix::Zero(2, 2), {}, 0.0}, ch, 2.0, 0.01);
  CHECK(std::abs(out.mat()(1, 1).real() - std::exp(-gamma * 2.0)) < 1e-9);
}

TEST_CASE("unitary evolution matches the exact propagator") {
  RandomOps rng(1);
  const ComplexMatrix h = rng.Hermitian(5);
  const DensityMatrix rho0 = rng.Density(5);
  const double t = 1.3;
  const ComplexMatrix u = Propagator(h, t);
  const ComplexMatrix exact = u * rho0.mat() * u.adjoint();
  const double dt = 0.01 / HermitianNorm(h);
  const double coarse = (Evolve(rho0, {h, {}, 0.0}, LindbladChannel(), t, dt).mat() - exact).norm();
  const double fine = (Evolve(rho0, {h, {}, 0.0}, LindbladChannel(), t, dt / 2).mat() - exact).norm();
  CHECK(fine < 1e-10);
  CHECK(coarse / fine > 12.0);  // fourth order
  CHECK(coarse / fine < 20.0);
}

TEST_CASE("piecewise-constant potential uses the value of each piece") {
  RandomOps rng(2);
  const ComplexMatrix h0 = rng.Hermitian(3, 0.3);
  const ComplexMatrix ua = rng.Hermitian(3, 0.3), ub = rng.Hermitian(3, 0.3);
  const double hold = 0.37;
  HamiltonianSpec spec{h0, [&](double t) { return std::floor(t / hold) == 0.0 ? ua : ub; }, hold};
  const DensityMatrix rho0 = rng.Density(3);
  // 0.37 is not a multiple of the step, so a naive grid would straddle it.
  const DensityMatrix out = Evolve(rho0, spec, LindbladChannel(), 0.6, 0.0025);
  const ComplexMatrix u = Propagator(h0 + ub, 0.6 - hold) * Propagator(h0 + ua, hold);
  CHECK((out.mat() - u * rho0.mat() * u.adjoint()).norm() < 1e-10);
}

TEST_CASE("stability guard") {
  RandomOps rng(3);
  const ComplexMatrix h = rng.Hermitian(4);
  const double dt = 0.5 / HermitianNorm(h);
  CHECK_THROWS_AS(Evolve(rng.Density(4), {h, {}, 0.0}, LindbladChannel(), 10 * dt, dt), Error);
}

TEST_CASE("dimension mismatches are rejected") {
  RandomOps rng(4);
  const LindbladChannel ch({{1.0, rng.Ginibre(3, 3)}});
  CHECK_THROWS_AS(LindbladRhs(rng.Density(4), rng.Hermitian(4), ch), Error);
  CHECK_THROWS_AS(LindbladChannel({{1.0, rng.Ginibre(3, 3)}, {1.0, rng.Ginibre(4, 4)}}), Error);
  CHECK_THROWS_AS(LindbladChannel({{-1.0, rng.Ginibre(3, 3)}}), Error);
}

TEST_CASE("channel rate scale and decay operator") {
  const LindbladChannel ch({{0.5, Lowering()}, {2.0, 3.0 * ComplexMatrix::Identity(2, 2)}});
  CHECK(ch.rate_scale() == doctest::Approx(0.5 + 2.0 * 9.0));
  ComplexMatrix k = 18.0 * ComplexMatrix::Identity(2, 2);
  k(1, 1) += 0.5;
  CHECK((ch.decay_operator() - k).norm() < 1e-14);
}

TEST_CASE("second-order error probability matches the exact unitary leak") {
  RandomOps rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix h = rng.Hermitian(4);
    const Projector p = rng.RandomProjector(4, 2);
    const DensityMatrix rho = rng.DensityIn(p);
    const ComplexMatrix perp = p.Complement().mat();
    double prev = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double dt = 0.02 / std::pow(2.0, k);
      const ComplexMatrix u = Propagator(h, dt);
      const double exact = (perp * u * rho.mat() * u.adjoint()).trace().real();
      const double err = std::abs(ErrorProbSecondOrder(rho, h, LindbladChannel(), p, dt) - exact);
      if (k > 0 && prev > 1e-14) CHECK(err / prev < 0.25);  // O(dt^3) or better
      prev = err;
    }
  }
}

TEST_CASE("second-order form with a channel against a fine integration") {
  RandomOps rng(6);
  const ComplexMatrix h = rng.Hermitian(3, 0.5);
  const LindbladChannel ch({{0.4, rng.Ginibre(3, 3)}});
  const Projector p = rng.RandomProjector(3, 1);
  const DensityMatrix rho = rng.DensityIn(p);
  double prev = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double dt = 0.04 / std::pow(2.0, k);
    const MeasurementOutcome m = MeasureAfterEvolve(rho, {h, {}, 0.0}, ch, p, dt, dt / 200.0);
    const double err = std::abs(ErrorProbSecondOrder(rho, h, ch, p, dt) - m.delta_p);
    if (k > 0) CHECK(err / prev < 0.2);
    prev = err;
  }
}

TEST_CASE("reduced form equals the second-order form without a channel") {
  RandomOps rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index d = rng.Int(2, 7);
    const Projector p = rng.RandomProjector(d, rng.Int(1, static_cast<int>(d) - 1));
    const DensityMatrix rho = rng.DensityIn(p);
    const ComplexMatrix u = rng.Hermitian(d);
    const double a = ErrorProbZenoReduced(rho, u, LindbladChannel(), p, 0.05);
    const double b = ErrorProbSecondOrder(rho, u, LindbladChannel(), p, 0.05);
    CHECK(std::abs(a - b) <= 1e-10 * b);
  }
}

TEST_CASE("reduced form ignores a block-diagonal ballistic term") {
  RandomOps rng(8);
  const Projector p = rng.RandomProjector(5, 2);
  const DensityMatrix rho = rng.DensityIn(p);
  const ComplexMatrix u = rng.Hermitian(5);
  const ComplexMatrix a = rng.Hermitian(5), perp = p.Complement().mat();
  const ComplexMatrix h0 = p.mat() * a * p.mat() + perp * a * perp;
  const double reduced = ErrorProbZenoReduced(rho, u, LindbladChannel(), p, 0.03);
  const double full = ErrorProbSecondOrder(rho, h0 + u, LindbladChannel(), p, 0.03);
  CHECK(std::abs(reduced - full) <= 1e-10 * full);
}

TEST_CASE("reduced form: jump contribution is linear in dt") {
  RandomOps rng(9);
  const Projector p = rng.RandomProjector(4, 2);
  const DensityMatrix rho = rng.DensityIn(p);
  const LindbladChannel ch({{0.3, rng.Ginibre(4, 4)}});
  const ComplexMatrix zero = ComplexMatrix::Zero(4, 4);
  const double a = ErrorProbZenoReduced(rho, zero, ch, p, 0.01);
  const double b = ErrorProbZenoReduced(rho, zero, ch, p, 0.02);
  CHECK(b == doctest::Approx(2.0 * a).epsilon(1e-12));
}

TEST_CASE("measurement returns a valid post-measurement state") {
  RandomOps rng(10);
  const Projector p = rng.RandomProjector(4, 2);
  const DensityMatrix rho = rng.DensityIn(p);
  const ComplexMatrix h = rng.Hermitian(4);
  const MeasurementOutcome m = MeasureAfterEvolve(rho, {h, {}, 0.0}, LindbladChannel(), p, 0.1, 0.001);
  CHECK(m.delta_p > 0.0);
  CHECK(std::abs(m.post_valid.mat().trace().real() - 1.0) < 1e-12);
  CHECK((p.mat() * m.post_valid.mat() * p.mat() - m.post_valid.mat()).norm() < 1e-12);
}

TEST_CASE("error probability requires a state inside the valid subspace") {
  RandomOps rng(11);
  const Projector p = rng.RandomProjector(4, 2);
  CHECK_THROWS_AS(ErrorProbSecondOrder(rng.Density(4), rng.Hermitian(4), LindbladChannel(), p, 0.1), Error);
}

TEST_CASE("finalize handles small negative eigenvalues and rejects large ones") {
  ComplexMatrix m(2, 2);
  m << 1.0 + 5e-8, 0.0, 0.0, -5e-8;
  const DensityMatrix ok = detail::FinalizeState(m, 1e-9);
  CHECK(Diagnose(ok.mat()).min_eigenvalue >= 0.0);
  ComplexMatrix bad(2, 2);
  bad << 1.0 + 1e-4, 0.0, 0.0, -1e-4;
  CHECK_THROWS_AS(detail::FinalizeState(bad, 1e-9), Error);
  CHECK_THROWS_AS(detail::FinalizeState(ComplexMatrix::Identity(2, 2) * 0.6, 1e-9), Error);
}
