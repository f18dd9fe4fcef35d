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

#include "zenolab/random_ops.hpp"

#include <cmath>

namespace zenolab {

double RandomOps::Normal() {
  // Marsaglia polar method; keeps the stream independent of the standard
  // library's distribution implementation.
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * engine_.Uniform() - 1.0;
    v = 2.0 * engine_.Uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  have_spare_ = true;
  return u * f;
}

int RandomOps::Int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

ComplexMatrix RandomOps::Ginibre(Eigen::Index rows, Eigen::Index cols) {
  ComplexMatrix a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = Complex(Normal(), Normal()) / std::sqrt(2.0);
  }
  return a;
}

ComplexMatrix RandomOps::Hermitian(Eigen::Index dim, double scale) {
  const ComplexMatrix a = Ginibre(dim, dim);
  return scale * (a + a.adjoint()) / std::sqrt(2.0);
}

ComplexMatrix RandomOps::Unitary(Eigen::Index dim) {
  const ComplexMatrix a = Ginibre(dim, dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

DensityMatrix RandomOps::Density(Eigen::Index dim) {
  const ComplexMatrix a = Ginibre(dim, dim);
  ComplexMatrix rho = a * a.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

DensityMatrix RandomOps::DensityIn(const Projector& p) {
  const ComplexMatrix& b = p.range_basis();
  const ComplexMatrix a = Ginibre(b.cols(), b.cols());
  ComplexMatrix inner = a * a.adjoint();
  inner /= inner.trace().real();
  ComplexMatrix rho = b * inner * b.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

Projector RandomOps::RandomProjector(Eigen::Index dim, Eigen::Index rank) {
  const ComplexMatrix u = Unitary(dim);
  return Projector::OntoColumns(u.leftCols(rank));
}

}  // namespace zenolab
