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

#include "radkit/accounting.hpp"

#include <algorithm>
#include <cmath>

#include "radkit/errors.hpp"
#include "radkit/stats.hpp"

namespace radkit {

Tradeoff Tradeoff::eps_delta(double eps, double delta) {
  if (eps < 0) throw ConfigError("epsilon must be nonnegative");
  if (delta < 0 || delta > 1) throw ConfigError("delta must lie in [0, 1]");
  Tradeoff tf;
  tf.kind_ = Kind::kEpsDelta;
  tf.eps_ = eps;
  tf.delta_ = delta;
  return tf;
}

Tradeoff Tradeoff::gaussian(double mu) {
  if (mu < 0) throw ConfigError("mu must be nonnegative");
  Tradeoff tf;
  tf.kind_ = Kind::kGaussian;
  tf.mu_ = mu;
  return tf;
}

double Tradeoff::eval(double alpha) const {
  if (alpha < 0.0 || alpha > 1.0) {
    throw ConfigError("trade-off functions are defined on [0, 1]");
  }
  if (kind_ == Kind::kEpsDelta) {
    double e = std::exp(eps_);
    double f = std::max(1.0 - delta_ - e * alpha, (1.0 - delta_ - alpha) / e);
    return std::max(f, 0.0);
  }
  if (mu_ == 0.0) return 1.0 - alpha;
  if (alpha >= 1.0) return 0.0;
  if (alpha <= 0.0) return 1.0;
  return norm_cdf(norm_quantile(1.0 - alpha) - mu_);
}

double tv_from_tradeoff(const Tradeoff& tf) {
  if (tf.kind() == Tradeoff::Kind::kEpsDelta) {
    double e = std::exp(tf.eps());
    return (e - 1.0 + 2.0 * tf.delta()) / (e + 1.0);
  }
  return 2.0 * norm_cdf(tf.mu() / 2.0) - 1.0;
}

double tradeoff_gain_max(const Tradeoff& tf, double lo, double hi) {
  lo = std::max(lo, 0.0);
  hi = std::min(hi, 1.0);
  if (hi < lo) std::swap(lo, hi);
  auto gain = [&tf](double a) { return 1.0 - tf.eval(a) - a; };
  double alpha_star;
  if (tf.kind() == Tradeoff::Kind::kEpsDelta) {
    // The two linear branches of f cross at (1 - delta) / (1 + e^eps); the
    // gain increases before the crossing and decreases after it.
    alpha_star = (1.0 - tf.delta()) / (1.0 + std::exp(tf.eps()));
  } else {
    // Gaussian family: the gain peaks at 1 - Phi(mu / 2).
    alpha_star = 1.0 - norm_cdf(tf.mu() / 2.0);
  }
  double a = std::clamp(alpha_star, lo, hi);
  return std::max(gain(a), std::max(gain(lo), gain(hi)));
}

double compose_tv(double per_step_tv, int steps) {
  if (per_step_tv < 0 || per_step_tv > 1) {
    throw ConfigError("per-step total variation must lie in [0, 1]");
  }
  if (steps < 1) throw ConfigError("composition needs at least one step");
  return 1.0 - std::pow(1.0 - per_step_tv, steps);
}

Tradeoff compose_gdp(double mu, int steps) {
  if (steps < 1) throw ConfigError("composition needs at least one step");
  return Tradeoff::gaussian(mu * std::sqrt(static_cast<double>(steps)));
}

std::pair<double, double> compose_basic(double eps, double delta, int steps) {
  if (steps < 1) throw ConfigError("composition needs at least one step");
  return {eps * steps, delta * steps};
}

}  // namespace radkit
