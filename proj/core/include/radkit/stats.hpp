// Copyright 2026 The RadKit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

namespace radkit {

// Standard normal CDF, evaluated through erfc for accuracy in both tails.
double norm_cdf(double x);

// Standard normal quantile. Rational initial guess refined with Halley
// steps; absolute error below 1e-13 on [1e-12, 1 - 1e-12].
double norm_quantile(double p);

// Compensated (Kahan) summation.
double kahan_sum(const std::vector<double>& values);

// Golden-section search for the maximum of a unimodal function on [lo, hi].
// Returns the maximizing abscissa with |x - x*| <= tol.
template <typename F>
double golden_section_max(F&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.61803398874989485;  // (sqrt(5) - 1) / 2
  double a = lo, b = hi;
  double c = b - (b - a) * kInvPhi;
  double d = a + (b - a) * kInvPhi;
  while (b - a > tol) {
    if (f(c) >= f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - (b - a) * kInvPhi;
    d = a + (b - a) * kInvPhi;
  }
  return 0.5 * (a + b);
}

}  // namespace radkit
