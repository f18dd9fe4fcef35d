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
#include "zenolab/composite.hpp"

#include <cmath>

#include "zenolab/error.hpp"

namespace zenolab {

namespace {

void CheckBudget(double sigma_budget) {
  Require(sigma_budget > 0.0 && std::isfinite(sigma_budget), ErrorCode::kInvalidArgument,
          "entropy budget must be positive");
}

// Shared tail: given per-subsystem weights c_i with nu_i = lambda c_i.
AllocationResult Solve(CostModel model, std::vector<SubsystemProfile> profiles, double sigma_budget) {
  AllocationResult out;
  out.model = model;
  std::vector<double> weight(profiles.size());
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    weight[i] = (model == CostModel::kZeno ? profiles[i].nu_z : 1.0) / profiles[i].eta;
    weight_sum += weight[i];
  }
  out.lambda = std::sqrt(sigma_budget / weight_sum);
  out.rates.resize(profiles.size());
  out.sigmas.resize(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    out.rates[i] = out.lambda * weight[i];
    out.sigmas[i] = SubsystemSigma(model, profiles[i], out.rates[i]);
    out.total_rate += out.rates[i];
    out.total_sigma += out.sigmas[i];
  }
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    out.eta_bar += out.rates[i] / out.total_rate * profiles[i].eta;
  }
  out.profiles = std::move(profiles);
  return out;
}

}  // namespace

double SubsystemSigma(CostModel model, const SubsystemProfile& profile, double rate) {
  const double base = rate * rate * profile.eta;
  return model == CostModel::kZeno ? base / profile.nu_z : base;
}

AllocationResult AllocateZeno(std::span<const SubsystemProfile> profiles, double sigma_budget) {
  Require(!profiles.empty(), ErrorCode::kInvalidArgument, "no subsystems to allocate");
  CheckBudget(sigma_budget);
  for (const auto& p : profiles) {
    Require(p.nu_z > 0.0 && std::isfinite(p.nu_z), ErrorCode::kInvalidArgument, "nu_z must be positive");
    Require(p.eta > 0.0 && std::isfinite(p.eta), ErrorCode::kInvalidArgument, "eta must be positive");
  }
  return Solve(CostModel::kZeno, {profiles.begin(), profiles.end()}, sigma_budget);
}

AllocationResult AllocateStrong(std::span<const double> etas, double sigma_budget) {
  Require(!etas.empty(), ErrorCode::kInvalidArgument, "no subsystems to allocate");
  CheckBudget(sigma_budget);
  std::vector<SubsystemProfile> profiles;
  profiles.reserve(etas.size());
  for (double eta : etas) {
    Require(eta > 0.0 && std::isfinite(eta), ErrorCode::kInvalidArgument, "eta must be positive");
    profiles.push_back({1.0, eta});
  }
  return Solve(CostModel::kStrong, std::move(profiles), sigma_budget);
}

bool VerifyEqualMarginalCost(const AllocationResult& result, double rel_tol) {
  Require(result.rates.size() == result.profiles.size() && !result.rates.empty(), ErrorCode::kInvalidArgument,
          "allocation result is incomplete");
  for (std::size_t i = 0; i < result.rates.size(); ++i) {
    const double rate = result.rates[i];
    Require(rate > 0.0, ErrorCode::kInvalidArgument, "marginal cost undefined for a zero rate");
    const double marginal = SubsystemSigma(result.model, result.profiles[i], rate) / rate;
    if (std::abs(marginal - result.lambda) > rel_tol * result.lambda) return false;
  }
  return true;
}

}  // namespace zenolab
