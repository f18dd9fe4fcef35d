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

#ifndef ZENOLAB_FIT_HPP_
#define ZENOLAB_FIT_HPP_

#include <span>

namespace zenolab {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct PowerLawFit {
  double exponent = 0.0;
  double exponent_stderr = 0.0;
  double log_prefactor = 0.0;
};

// Least-squares slope of log(y) against log(x). When y_stderr is supplied,
// each point is weighted by the inverse squared relative standard error;
// if any of those errors is zero the fit falls back to equal weights.
// Requires at least two points with x, y > 0.
PowerLawFit FitPowerLaw(std::span<const double> x, std::span<const double> y,
                        std::span<const double> y_stderr = {});

// Batch-means estimate of the mean and its standard error for a correlated
// series. Uses up to `max_batches` contiguous batches.
Estimate BatchMeans(std::span<const double> series, int max_batches = 64);

}  // namespace zenolab

#endif  // ZENOLAB_FIT_HPP_
