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

#include "zenolab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "zenolab/error.hpp"

namespace zenolab {

PowerLawFit FitPowerLaw(std::span<const double> x, std::span<const double> y, std::span<const double> y_stderr) {
  Require(x.size() == y.size() && x.size() >= 2, ErrorCode::kInvalidArgument, "power-law fit needs >= 2 paired points");
  Require(y_stderr.empty() || y_stderr.size() == y.size(), ErrorCode::kInvalidArgument,
          "standard errors must match the data");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n), w(n, 1.0);
  bool weighted = !y_stderr.empty();
  for (std::size_t i = 0; i < n; ++i) {
    Require(x[i] > 0.0 && y[i] > 0.0, ErrorCode::kInvalidArgument, "power-law fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    if (weighted) {
      const double rel = y_stderr[i] / y[i];
      if (!(rel > 0.0) || !std::isfinite(rel)) {
        weighted = false;
      } else {
        w[i] = 1.0 / (rel * rel);
      }
    }
  }
  if (!weighted) std::fill(w.begin(), w.end(), 1.0);

  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    sx += w[i] * lx[i];
    sy += w[i] * ly[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (lx[i] - mx) * (lx[i] - mx);
    sxy += w[i] * (lx[i] - mx) * (ly[i] - my);
  }
  Require(sxx > 0.0, ErrorCode::kInvalidArgument, "power-law fit needs distinct x values");

  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.log_prefactor = my - fit.exponent * mx;
  if (weighted) {
    // Weights are inverse variances of log y.
    fit.exponent_stderr = std::sqrt(1.0 / sxx);
  } else if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ly[i] - fit.log_prefactor - fit.exponent * lx[i];
      rss += r * r;
    }
    fit.exponent_stderr = std::sqrt(rss / (n - 2) / sxx);
  }
  return fit;
}

Estimate BatchMeans(std::span<const double> series, int max_batches) {
  Estimate out;
  if (series.empty()) return out;
  const std::size_t n = series.size();
  double total = 0.0;
  for (double v : series) total += v;
  out.value = total / n;
  const std::size_t batches = std::min<std::size_t>(std::max(2, max_batches), n);
  if (batches < 2) return out;
  const std::size_t size = n / batches;
  std::vector<double> means;
  means.reserve(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * size; i < (b + 1) * size; ++i) s += series[i];
    means.push_back(s / size);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= batches;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (batches - 1.0);
  out.std_error = std::sqrt(var / batches);
  return out;
}

}  // namespace zenolab
