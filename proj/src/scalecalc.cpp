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

#include "zenolab/scalecalc.hpp"

#include <cmath>

#include "zenolab/error.hpp"

namespace zenolab {

void GeometryParams::Validate() const {
  Require(r > 0.0 && area_coeff > 0.0 && vol_coeff > 0.0, ErrorCode::kInvalidArgument,
          "radius and geometric coefficients must be positive");
  Require(std::isfinite(r) && std::isfinite(area_exp) && std::isfinite(vol_exp), ErrorCode::kInvalidArgument,
          "geometry parameters must be finite");
}

double GeometryParams::Area() const { return area_coeff * std::pow(r, area_exp); }
double GeometryParams::Volume() const { return vol_coeff * std::pow(r, vol_exp); }

GeometricRates ComputeGeometricRates(const GeometryParams& g) {
  g.Validate();
  const double a = g.Area();
  const double v = g.Volume();
  return {std::sqrt(a * v), std::sqrt(a / v)};
}

double IrreversibleRate(const CompareParams& p) {
  Require(p.delta_i > 0.0, ErrorCode::kInvalidArgument, "delta_i must be positive");
  Require(p.sigma_dot >= 0.0, ErrorCode::kInvalidArgument, "sigma_dot must be >= 0");
  return p.sigma_dot / p.delta_i;
}

double AdvantageRatio(const GeometryParams& g, double delta_i, double sigma_per_area) {
  g.Validate();
  Require(sigma_per_area > 0.0, ErrorCode::kInvalidArgument, "sigma_per_area must be positive");
  const double irreversible = IrreversibleRate({delta_i, g.Area() * sigma_per_area});
  return ComputeGeometricRates(g).nu_net / irreversible;
}

double CrossoverRadius(const GeometryParams& g, double delta_i, double sigma_per_area, double r_lo, double r_hi) {
  Require(r_lo > 0.0 && r_hi > r_lo, ErrorCode::kInvalidArgument, "need 0 < r_lo < r_hi");
  auto log_ratio = [&](double log_r) {
    GeometryParams at = g;
    at.r = std::exp(log_r);
    return std::log(AdvantageRatio(at, delta_i, sigma_per_area));
  };
  double lo = std::log(r_lo), hi = std::log(r_hi);
  double f_lo = log_ratio(lo);
  const double f_hi = log_ratio(hi);
  Require(f_lo * f_hi <= 0.0, ErrorCode::kInvalidArgument, "no crossover inside the bracket");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = log_ratio(mid);
    if ((f_mid <= 0.0) == (f_lo <= 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace zenolab
