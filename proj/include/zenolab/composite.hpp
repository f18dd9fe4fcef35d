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
#ifndef ZENOLAB_COMPOSITE_HPP_
#define ZENOLAB_COMPOSITE_HPP_

#include <span>
#include <vector>

namespace zenolab {

struct SubsystemProfile {
  double nu_z = 0.0;  // measurement rate of this subsystem
  double eta = 0.0;
};

enum class CostModel {
  kZeno,   // sigma_i = nu_i^2 eta_i / nu_z_i
  kStrong  // sigma_i = nu_i^2 eta_i
};

struct AllocationResult {
  CostModel model = CostModel::kZeno;
  std::vector<SubsystemProfile> profiles;  // nu_z unused (1) for kStrong
  std::vector<double> rates;               // nu_C,i
  std::vector<double> sigmas;              // per-subsystem entropy rates
  double lambda = 0.0;
  double total_rate = 0.0;
  double total_sigma = 0.0;
  double eta_bar = 0.0;  // eta averaged with weights nu_C,i / nu_C
};

// Entropy rate of subsystem i running at the given rate under the given cost model.
double SubsystemSigma(CostModel model, const SubsystemProfile& profile, double rate);

// Maximizes sum_i nu_i subject to sum_i nu_i^2 eta_i / nu_z_i = budget.
// Stationarity of the Lagrangian gives nu_i = lambda nu_z_i / eta_i.
AllocationResult AllocateZeno(std::span<const SubsystemProfile> profiles, double sigma_budget);

// Same with sigma_i = nu_i^2 eta_i: nu_i = lambda / eta_i.
AllocationResult AllocateStrong(std::span<const double> etas, double sigma_budget);

// Recomputes sigma_i / nu_i from the stored rates and checks that every
// marginal cost equals lambda to 1e-9 relative. Zero rates are an error.
bool VerifyEqualMarginalCost(const AllocationResult& result, double rel_tol = 1e-9);

}  // namespace zenolab

#endif  // ZENOLAB_COMPOSITE_HPP_
