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

#ifndef ZENOLAB_RANDOM_OPS_HPP_
#define ZENOLAB_RANDOM_OPS_HPP_

#include <cstdint>

#include "zenolab/linop.hpp"
#include "zenolab/rng.hpp"

namespace zenolab {

// Random instances for invariant checks and tests. All draws come from a
// SplitMix64 engine, so a seed pins the instance.
class RandomOps {
 public:
  explicit RandomOps(std::uint64_t seed) : engine_(seed) {}

  double Normal();
  double Uniform() { return engine_.Uniform(); }
  // Integer in [lo, hi].
  int Int(int lo, int hi);

  ComplexMatrix Ginibre(Eigen::Index rows, Eigen::Index cols);
  // Hermitian with E|H_ij|^2 = scale^2.
  ComplexMatrix Hermitian(Eigen::Index dim, double scale = 1.0);
  // Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
  ComplexMatrix Unitary(Eigen::Index dim);
  // Full-rank random density matrix (Hilbert-Schmidt measure).
  DensityMatrix Density(Eigen::Index dim);
  // Random density matrix supported on range(p).
  DensityMatrix DensityIn(const Projector& p);
  // Projector onto a random subspace of the given rank.
  Projector RandomProjector(Eigen::Index dim, Eigen::Index rank);

 private:
  SplitMix64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace zenolab

#endif  // ZENOLAB_RANDOM_OPS_HPP_
