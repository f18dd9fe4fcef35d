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
#include "zenolab/error.hpp"
#include "zenolab/fit.hpp"
#include "zenolab/random_ops.hpp"

using namespace zenolab;

TEST_CASE("power-law fit recovers an exact law") {
  std::vector<double> x, y;
  for (int i = 0; i < 6; ++i) {
    x.push_back(std::pow(10.0, -3.0 + 0.4 * i));
    y.push_back(3.0 * std::pow(x.back(), 1.7));
  }
  const PowerLawFit f = FitPowerLaw(x, y);
  CHECK(f.exponent == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(f.log_prefactor == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.exponent_stderr < 1e-10);
}

TEST_CASE("weighted power-law fit") {
  const std::vector<double> x{1, 2, 4, 8}, y{1, 4.4, 16, 64}, se{0.01, 1.0, 0.16, 0.64};
  const PowerLawFit w = FitPowerLaw(x, y, se);
  const PowerLawFit u = FitPowerLaw(x, y);
  // The noisy second point is down-weighted.
  CHECK(std::abs(w.exponent - 2.0) < std::abs(u.exponent - 2.0));
  CHECK_THROWS_AS(FitPowerLaw(std::vector<double>{1.0}, std::vector<double>{1.0}), Error);
  CHECK_THROWS_AS(FitPowerLaw(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 0.0}), Error);
}

TEST_CASE("batch means of iid data") {
  RandomOps rng(1);
  std::vector<double> s;
  for (int i = 0; i < 64000; ++i) s.push_back(rng.Normal());
  const Estimate e = BatchMeans(s);
  CHECK(std::abs(e.value) < 4.0 * e.std_error);
  CHECK(e.std_error == doctest::Approx(1.0 / std::sqrt(64000.0)).epsilon(0.3));
}
