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
#ifndef ZENOLAB_LINOP_HPP_
#define ZENOLAB_LINOP_HPP_

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace zenolab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPositivityTol = 1e-8;
inline constexpr double kProjectorTol = 1e-10;

// Largest absolute entry of a - a^dagger.
double HermiticityResidual(const ComplexMatrix& a);
bool IsHermitian(const ComplexMatrix& a, double tol = kHermitianTol);
// Spectral norm of a Hermitian matrix (largest |eigenvalue|).
double HermitianNorm(const ComplexMatrix& a);
// Ascending eigenvalues of a Hermitian matrix.
Eigen::VectorXd HermitianEigenvalues(const ComplexMatrix& a);

ComplexMatrix Commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix Anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

// Hermitian, positive semidefinite, unit trace. Construction validates all
// three; there is no way to obtain an invalid instance short of the
// Unchecked() escape hatch used by fault-injection tests.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix mat);

  static DensityMatrix Pure(Eigen::Index dim, Eigen::Index index);
  static DensityMatrix PureState(const Eigen::VectorXcd& psi);
  static DensityMatrix MaximallyMixed(Eigen::Index dim);
  static DensityMatrix Unchecked(ComplexMatrix mat);

  const ComplexMatrix& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  struct UncheckedTag {};
  DensityMatrix(ComplexMatrix mat, UncheckedTag) : mat_(std::move(mat)) {}
  ComplexMatrix mat_;
};

// Residuals of the density-matrix invariants, for reporting.
struct DensityDiagnostics {
  double trace_error = 0.0;
  double hermiticity = 0.0;
  double min_eigenvalue = 0.0;
};
DensityDiagnostics Diagnose(const ComplexMatrix& rho);

// Orthogonal projector with cached orthonormal bases of its range and of
// the complement of its range.
class Projector {
 public:
  explicit Projector(ComplexMatrix mat);

  // Projector onto the listed computational basis vectors.
  static Projector OntoBasisVectors(Eigen::Index dim, const std::vector<Eigen::Index>& indices);
  // Projector onto the column span of an orthonormal set.
  static Projector OntoColumns(const ComplexMatrix& orthonormal_columns);

  const ComplexMatrix& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }
  Eigen::Index rank() const { return range_.cols(); }
  // dim x rank, orthonormal columns spanning range(P).
  const ComplexMatrix& range_basis() const { return range_; }
  // dim x (dim - rank), orthonormal columns spanning range(1 - P).
  const ComplexMatrix& complement_basis() const { return complement_; }

  Projector Complement() const;
  // Uniform mixture on range(P): P / rank.
  DensityMatrix UniformState() const;

 private:
  ComplexMatrix mat_;
  ComplexMatrix range_;
  ComplexMatrix complement_;
};

// Valid computational subspaces {P_i} plus the non-computational remainder.
class ProjectorPartition {
 public:
  ProjectorPartition(std::vector<Projector> computational, Projector noncomputational);

  // The non-computational projector is taken as 1 - sum_i P_i.
  static ProjectorPartition FromComputational(std::vector<Projector> computational);
  // Consecutive computational-basis blocks of the given ranks; any leftover
  // basis vectors form the non-computational subspace.
  static ProjectorPartition ContiguousBlocks(Eigen::Index dim, const std::vector<Eigen::Index>& ranks);

  const std::vector<Projector>& computational() const { return computational_; }
  const Projector& noncomputational() const { return noncomputational_; }
  std::size_t size() const { return computational_.size(); }
  Eigen::Index dim() const { return noncomputational_.dim(); }

  double orthogonality_residual() const { return orthogonality_residual_; }
  double completeness_residual() const { return completeness_residual_; }

 private:
  std::vector<Projector> computational_;
  Projector noncomputational_;
  double orthogonality_residual_ = 0.0;
  double completeness_residual_ = 0.0;
};

// Von Neumann entropy in nats; eigenvalues in [-1e-8, 0) are clamped to 0.
double VonNeumannEntropy(const DensityMatrix& rho);

// Blocks of an operator in the ordered (P, 1-P) basis:
//   o00 = B^+ O B,  o01 = B^+ O C,  o10 = C^+ O B,  o11 = C^+ O C
// with B = range_basis(), C = complement_basis().
struct Blocks {
  ComplexMatrix o00, o01, o10, o11;
};
Blocks BlockDecompose(const ComplexMatrix& op, const Projector& p);
ComplexMatrix BlockReassemble(const Blocks& blocks, const Projector& p);

// tr(rho op).
Complex Expectation(const DensityMatrix& rho, const ComplexMatrix& op);
Complex TraceProduct(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace zenolab

#endif  // ZENOLAB_LINOP_HPP_
