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
#include <vector>

#include "doctest.h"
#include "zenolab/composite.hpp"
#include "zenolab/error.hpp"

using namespace zenolab;

TEST_CASE("two-subsystem Zeno allocation in closed form") {
  // nu_i = lambda nu_z_i / eta_i with lambda = sqrt(B / sum(nu_z_i / eta_i)).
  const std::vector<SubsystemProfile> prof{{1.0, 1.0}, {4.0, 2.0}};
  const AllocationResult a = AllocateZeno(prof, 3.0);
  const double lambda = std::sqrt(3.0 / (1.0 + 2.0));
  CHECK(a.lambda == doctest::Approx(lambda).epsilon(1e-14));
  CHECK(a.rates[0] == doctest::Approx(lambda).epsilon(1e-14));
  CHECK(a.rates[1] == doctest::Approx(2.0 * lambda).epsilon(1e-14));
  CHECK(a.total_sigma == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(a.total_rate == doctest::Approx(3.0 * lambda).epsilon(1e-14));
  CHECK(a.eta_bar == doctest::Approx((1.0 * lambda + 2.0 * 2.0 * lambda) / (3.0 * lambda)).epsilon(1e-14));
  CHECK(VerifyEqualMarginalCost(a));
}

TEST_CASE("strong allocation in closed form") {
  const std::vector<double> etas{0.5, 2.0};
  const AllocationResult a = AllocateStrong(etas, 1.0);
  const double lambda = std::sqrt(1.0 / (2.0 + 0.5));
  CHECK(a.rates[0] == doctest::Approx(lambda / 0.5).epsilon(1e-14));
  CHECK(a.rates[1] == doctest::Approx(lambda / 2.0).epsilon(1e-14));
  CHECK(a.total_sigma == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(VerifyEqualMarginalCost(a));
}

TEST_CASE("allocation beats nearby feasible points") {
  const std::vector<SubsystemProfile> prof{{1.0, 0.7}, {2.5, 1.1}, {0.4, 0.3}};
  const AllocationResult a = AllocateZeno(prof, 2.0);
  // Move rate between subsystems 0 and 1, then rescale onto the budget.
  for (double eps : {-0.05, -0.01, 0.01, 0.05}) {
    std::vector<double> r = a.rates;
    r[0] *= 1.0 + eps;
    r[1] *= 1.0 - eps;
    double sigma = 0.0, total = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) sigma += SubsystemSigma(CostModel::kZeno, prof[i], r[i]);
    for (double x : r) total += x * std::sqrt(2.0 / sigma);
    CHECK(total < a.total_rate);
  }
}

TEST_CASE("marginal-cost check detects a perturbed allocation") {
  AllocationResult a = AllocateStrong(std::vector<double>{1.0, 2.0, 3.0}, 1.0);
  a.rates[1] *= 1.001;
  CHECK_FALSE(VerifyEqualMarginalCost(a));
  a.rates[1] = 0.0;
  CHECK_THROWS_AS(VerifyEqualMarginalCost(a), Error);
}

TEST_CASE("allocation input validation") {
  CHECK_THROWS_AS(AllocateZeno(std::vector<SubsystemProfile>{}, 1.0), Error);
  CHECK_THROWS_AS(AllocateZeno(std::vector<SubsystemProfile>{{1.0, -1.0}}, 1.0), Error);
  CHECK_THROWS_AS(AllocateZeno(std::vector<SubsystemProfile>{{1.0, 1.0}}, 0.0), Error);
  CHECK_THROWS_AS(AllocateStrong(std::vector<double>{0.0}, 1.0), Error);
}

TEST_CASE("single subsystem reproduces the single-system bound") {
  const AllocationResult a = AllocateZeno(std::vector<SubsystemProfile>{{5.0, 0.4}}, 2.0);
  CHECK(a.total_sigma == doctest::Approx(a.total_rate * a.total_rate * 0.4 / 5.0).epsilon(1e-14));
}
