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
#include "zenolab/linop.hpp"

#include <cmath>
#include <sstream>

#include "zenolab/error.hpp"

namespace zenolab {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kModelViolation: return "model violation";
    case ErrorCode::kNumerical: return "numerical failure";
    case ErrorCode::kInsufficientData: return "insufficient data";
  }
  return "unknown";
}

namespace {

void RequireSquare(const ComplexMatrix& a, const char* what) {
  Require(a.rows() == a.cols() && a.rows() > 0, ErrorCode::kDimensionMismatch,
          std::string(what) + " must be a non-empty square matrix");
  Require(a.allFinite(), ErrorCode::kInvalidArgument, std::string(what) + " has non-finite entries");
}

void RequireSameDim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << what << ": " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
    Fail(ErrorCode::kDimensionMismatch, os.str());
  }
}

}  // namespace

double HermiticityResidual(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool IsHermitian(const ComplexMatrix& a, double tol) {
  return a.rows() == a.cols() && HermiticityResidual(a) <= tol;
}

Eigen::VectorXd HermitianEigenvalues(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double HermitianNorm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  const Eigen::VectorXd ev = HermitianEigenvalues(a);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

ComplexMatrix Commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  RequireSameDim(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix Anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  RequireSameDim(a, b, "anticommutator");
  return a * b + b * a;
}

DensityDiagnostics Diagnose(const ComplexMatrix& rho) {
  DensityDiagnostics d;
  d.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  d.hermiticity = HermiticityResidual(rho);
  const ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
  d.min_eigenvalue = HermitianEigenvalues(sym)(0);
  return d;
}

DensityMatrix::DensityMatrix(ComplexMatrix mat) : mat_(std::move(mat)) {
  RequireSquare(mat_, "density matrix");
  const DensityDiagnostics d = Diagnose(mat_);
  Require(d.hermiticity <= kHermitianTol, ErrorCode::kInvalidArgument, "density matrix is not Hermitian");
  Require(d.trace_error <= kTraceTol, ErrorCode::kInvalidArgument, "density matrix trace differs from 1");
  Require(d.min_eigenvalue >= -kPositivityTol, ErrorCode::kInvalidArgument,
          "density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::Pure(Eigen::Index dim, Eigen::Index index) {
  Require(index >= 0 && index < dim, ErrorCode::kInvalidArgument, "basis index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m), UncheckedTag{});
}

DensityMatrix DensityMatrix::PureState(const Eigen::VectorXcd& psi) {
  Require(psi.size() > 0 && psi.norm() > 0.0, ErrorCode::kInvalidArgument, "state vector is zero");
  const Eigen::VectorXcd v = psi.normalized();
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::MaximallyMixed(Eigen::Index dim) {
  Require(dim > 0, ErrorCode::kInvalidArgument, "dimension must be positive");
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim), UncheckedTag{});
}

DensityMatrix DensityMatrix::Unchecked(ComplexMatrix mat) {
  return DensityMatrix(std::move(mat), UncheckedTag{});
}

Projector::Projector(ComplexMatrix mat) : mat_(std::move(mat)) {
  RequireSquare(mat_, "projector");
  Require(HermiticityResidual(mat_) <= kProjectorTol, ErrorCode::kInvalidArgument, "projector is not Hermitian");
  Require((mat_ * mat_ - mat_).cwiseAbs().maxCoeff() <= kProjectorTol, ErrorCode::kInvalidArgument,
          "projector is not idempotent");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (mat_ + mat_.adjoint()));
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const Eigen::Index d = mat_.rows();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double e = ev(i);
    Require(std::abs(e) <= kProjectorTol || std::abs(e - 1.0) <= kProjectorTol, ErrorCode::kInvalidArgument,
            "projector eigenvalue is not 0 or 1");
    if (e > 0.5) ++rank;
  }
  // Eigenvalues ascend, so the range occupies the trailing columns.
  range_ = solver.eigenvectors().rightCols(rank);
  complement_ = solver.eigenvectors().leftCols(d - rank);
}

Projector Projector::OntoBasisVectors(Eigen::Index dim, const std::vector<Eigen::Index>& indices) {
  ComplexMatrix cols = ComplexMatrix::Zero(dim, static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    Require(indices[k] >= 0 && indices[k] < dim, ErrorCode::kInvalidArgument, "basis index out of range");
    cols(indices[k], static_cast<Eigen::Index>(k)) = 1.0;
  }
  return OntoColumns(cols);
}

Projector Projector::OntoColumns(const ComplexMatrix& orthonormal_columns) {
  ComplexMatrix p = orthonormal_columns * orthonormal_columns.adjoint();
  Projector out(p);
  // Keep the caller's basis when it is exact; it makes block layouts predictable.
  if (orthonormal_columns.cols() == out.rank()) out.range_ = orthonormal_columns;
  return out;
}

Projector Projector::Complement() const {
  const Eigen::Index d = dim();
  Projector out(ComplexMatrix::Identity(d, d) - mat_);
  out.range_ = complement_;
  out.complement_ = range_;
  return out;
}

DensityMatrix Projector::UniformState() const {
  Require(rank() > 0, ErrorCode::kInvalidArgument, "uniform state on a zero projector");
  return DensityMatrix(range_ * range_.adjoint() / static_cast<double>(rank()));
}

ProjectorPartition::ProjectorPartition(std::vector<Projector> computational, Projector noncomputational)
    : computational_(std::move(computational)), noncomputational_(std::move(noncomputational)) {
  Require(!computational_.empty(), ErrorCode::kInvalidArgument, "partition needs at least one computational projector");
  const Eigen::Index d = noncomputational_.dim();
  ComplexMatrix sum = noncomputational_.mat();
  double ortho = 0.0;
  for (std::size_t i = 0; i < computational_.size(); ++i) {
    Require(computational_[i].dim() == d, ErrorCode::kDimensionMismatch, "partition projectors differ in dimension");
    sum += computational_[i].mat();
    ortho = std::max(ortho, (computational_[i].mat() * noncomputational_.mat()).cwiseAbs().maxCoeff());
    for (std::size_t j = i + 1; j < computational_.size(); ++j) {
      ortho = std::max(ortho, (computational_[i].mat() * computational_[j].mat()).cwiseAbs().maxCoeff());
    }
  }
  orthogonality_residual_ = ortho;
  completeness_residual_ = (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  Require(orthogonality_residual_ <= kProjectorTol, ErrorCode::kInvalidArgument, "partition projectors are not orthogonal");
  Require(completeness_residual_ <= kProjectorTol, ErrorCode::kInvalidArgument, "partition projectors do not sum to identity");
}

ProjectorPartition ProjectorPartition::FromComputational(std::vector<Projector> computational) {
  Require(!computational.empty(), ErrorCode::kInvalidArgument, "partition needs at least one computational projector");
  const Eigen::Index d = computational.front().dim();
  ComplexMatrix rest = ComplexMatrix::Identity(d, d);
  for (const auto& p : computational) {
    Require(p.dim() == d, ErrorCode::kDimensionMismatch, "partition projectors differ in dimension");
    rest -= p.mat();
  }
  Projector null(rest);
  return ProjectorPartition(std::move(computational), std::move(null));
}

ProjectorPartition ProjectorPartition::ContiguousBlocks(Eigen::Index dim, const std::vector<Eigen::Index>& ranks) {
  std::vector<Projector> blocks;
  Eigen::Index next = 0;
  for (Eigen::Index r : ranks) {
    Require(r > 0, ErrorCode::kInvalidArgument, "block rank must be positive");
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < r; ++k) idx.push_back(next++);
    Require(next <= dim, ErrorCode::kDimensionMismatch, "block ranks exceed the dimension");
    blocks.push_back(Projector::OntoBasisVectors(dim, idx));
  }
  std::vector<Eigen::Index> rest;
  for (Eigen::Index k = next; k < dim; ++k) rest.push_back(k);
  Projector null = Projector::OntoBasisVectors(dim, rest);
  return ProjectorPartition(std::move(blocks), std::move(null));
}

double VonNeumannEntropy(const DensityMatrix& rho) {
  const Eigen::VectorXd ev = HermitianEigenvalues(rho.mat());
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double lambda = ev(i);
    Require(lambda >= -kPositivityTol, ErrorCode::kInvalidArgument, "negative eigenvalue in entropy evaluation");
    if (lambda <= 0.0) continue;
    s -= lambda * std::log(lambda);
  }
  return std::max(s, 0.0);
}

Blocks BlockDecompose(const ComplexMatrix& op, const Projector& p) {
  RequireSameDim(op, p.mat(), "block decomposition");
  const ComplexMatrix& b = p.range_basis();
  const ComplexMatrix& c = p.complement_basis();
  Blocks out;
  const ComplexMatrix ob = op * b;
  const ComplexMatrix oc = op * c;
  out.o00 = b.adjoint() * ob;
  out.o01 = b.adjoint() * oc;
  out.o10 = c.adjoint() * ob;
  out.o11 = c.adjoint() * oc;
  return out;
}

ComplexMatrix BlockReassemble(const Blocks& blocks, const Projector& p) {
  const ComplexMatrix& b = p.range_basis();
  const ComplexMatrix& c = p.complement_basis();
  const Eigen::Index r = b.cols();
  const Eigen::Index q = c.cols();
  Require(blocks.o00.rows() == r && blocks.o00.cols() == r && blocks.o01.rows() == r && blocks.o01.cols() == q &&
              blocks.o10.rows() == q && blocks.o10.cols() == r && blocks.o11.rows() == q && blocks.o11.cols() == q,
          ErrorCode::kDimensionMismatch, "block shapes do not match the projector");
  if (q == 0) return b * blocks.o00 * b.adjoint();
  if (r == 0) return c * blocks.o11 * c.adjoint();
  const Eigen::Index d = p.dim();
  ComplexMatrix basis(d, d);
  basis << b, c;
  ComplexMatrix inner(d, d);
  inner << blocks.o00, blocks.o01, blocks.o10, blocks.o11;
  return basis * inner * basis.adjoint();
}

Complex TraceProduct(const ComplexMatrix& a, const ComplexMatrix& b) {
  RequireSameDim(a, b.transpose(), "trace product");
  return a.transpose().cwiseProduct(b).sum();
}

Complex Expectation(const DensityMatrix& rho, const ComplexMatrix& op) {
  RequireSameDim(rho.mat(), op, "expectation");
  return TraceProduct(rho.mat(), op);
}

}  // namespace zenolab
