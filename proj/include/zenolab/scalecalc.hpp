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

#ifndef ZENOLAB_SCALECALC_HPP_
#define ZENOLAB_SCALECALC_HPP_

namespace zenolab {

// A = area_coeff r^area_exp, V = vol_coeff r^vol_exp. The scaling laws are
// only known up to constants; the coefficients carry them (default 1).
struct GeometryParams {
  double r = 1.0;
  double area_coeff = 1.0;
  double vol_coeff = 1.0;
  double area_exp = 2.0;
  double vol_exp = 3.0;

  void Validate() const;
  double Area() const;
  double Volume() const;
};

struct CompareParams {
  double delta_i = 0.0;    // information erased per operation, nats
  double sigma_dot = 0.0;  // available entropy rate
};

struct GeometricRates {
  double nu_net = 0.0;     // sqrt(A V)
  double nu_single = 0.0;  // sqrt(A / V), one subsystem of a maximally divided computer
};

GeometricRates ComputeGeometricRates(const GeometryParams& g);

// sigma_dot / delta_i
double IrreversibleRate(const CompareParams& p);

// Reversible over irreversible rate when the entropy budget is carried by
// the boundary:  sqrt(A V) / (A sigma_per_area / delta_i).
double AdvantageRatio(const GeometryParams& g, double delta_i, double sigma_per_area);

// Radius where AdvantageRatio == 1, found by bisection on log r inside
// [r_lo, r_hi]. Only g's coefficients and exponents are used.
double CrossoverRadius(const GeometryParams& g, double delta_i, double sigma_per_area, double r_lo, double r_hi);

}  // namespace zenolab

#endif  // ZENOLAB_SCALECALC_HPP_
