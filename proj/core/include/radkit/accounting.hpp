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

#include <utility>

namespace radkit {

// Hypothesis-testing trade-off function f(alpha) on [0, 1]: continuous,
// convex, non-increasing, f(alpha) <= 1 - alpha. Two parametric families are
// supported: the (eps, delta) piecewise-linear curve and the Gaussian curve
// with parameter mu.
class Tradeoff {
 public:
  enum class Kind { kEpsDelta, kGaussian };

  static Tradeoff eps_delta(double eps, double delta);
  static Tradeoff gaussian(double mu);

  Kind kind() const { return kind_; }
  double eps() const { return eps_; }
  double delta() const { return delta_; }
  double mu() const { return mu_; }

  // f(alpha); throws ConfigError outside [0, 1].
  double eval(double alpha) const;

 private:
  Tradeoff() = default;
  Kind kind_ = Kind::kEpsDelta;
  double eps_ = 0.0, delta_ = 0.0, mu_ = 0.0;
};

// max over alpha in [0,1] of 1 - f(alpha) - alpha, evaluated analytically:
// (e^eps - 1 + 2 delta) / (e^eps + 1) for the (eps, delta) family and
// 2 Phi(mu/2) - 1 for the Gaussian family.
double tv_from_tradeoff(const Tradeoff& tf);

// max over alpha in [lo, hi] of 1 - f(alpha) - alpha (analytic per family).
double tradeoff_gain_max(const Tradeoff& tf, double lo, double hi);

// Total variation after T-fold composition of per-step total variation.
double compose_tv(double per_step_tv, int steps);

// mu-GDP composes to (mu sqrt(T))-GDP.
Tradeoff compose_gdp(double mu, int steps);

// Basic composition of (eps, delta)-DP.
std::pair<double, double> compose_basic(double eps, double delta, int steps);

}  // namespace radkit
