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

#include "radkit/random.hpp"

#include <cmath>
#include <numbers>

namespace radkit {

double sample_normal(Pcg32& rng) {
  double u1 = rng.u01_positive();
  double u2 = rng.u01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double sample_laplace(Pcg32& rng, double b) {
  double w = rng.u01_positive() - 0.5;
  double sign = w < 0 ? -1.0 : 1.0;
  return -b * sign * std::log(1.0 - 2.0 * std::fabs(w));
}

namespace {

// Inverse-transform binomial for a chunk small enough that (1-p)^n does not
// underflow. Walks the pmf recurrence from k = 0.
std::uint32_t binomial_inverse(Pcg32& rng, std::uint32_t n, double p) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  double u = rng.u01();
  double ratio = p / (1.0 - p);
  double pmf = std::pow(1.0 - p, static_cast<double>(n));
  double cdf = pmf;
  std::uint32_t k = 0;
  while (u >= cdf && k < n) {
    pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
    ++k;
    cdf += pmf;
  }
  return k;
}

constexpr std::uint32_t kBinomialChunk = 512;

}  // namespace

std::uint32_t sample_binomial(Pcg32& rng, std::uint32_t n, double p) {
  bool flip = p > 0.5;
  double q = flip ? 1.0 - p : p;
  std::uint32_t total = 0;
  std::uint32_t left = n;
  // (1-q)^512 >= 2^-512, comfortably inside double range.
  while (left > kBinomialChunk) {
    total += binomial_inverse(rng, kBinomialChunk, q);
    left -= kBinomialChunk;
  }
  total += binomial_inverse(rng, left, q);
  return flip ? n - total : total;
}

namespace {

// Integer powers show up for the beta(0.1, 0.1) prior, where 1/alpha
// computes to 10 up to roundoff.
double pow_positive(double x, double e) {
  double r = std::round(e);
  if (std::fabs(r - e) <= 1e-12 * std::max(1.0, std::fabs(e)) && r >= 1.0 &&
      r <= 64.0) {
    double acc = 1.0;
    double base = x;
    auto k = static_cast<unsigned>(r);
    while (k != 0) {
      if (k & 1u) acc *= base;
      base *= base;
      k >>= 1u;
    }
    return acc;
  }
  return std::pow(x, e);
}

}  // namespace

double sample_beta(Pcg32& rng, double alpha, double beta) {
  if (alpha <= 1.0 && beta <= 1.0) {
    // Johnk's method.
    double ia = 1.0 / alpha;
    double ib = 1.0 / beta;
    for (;;) {
      double x = pow_positive(rng.u01_positive(), ia);
      double y = pow_positive(rng.u01_positive(), ib);
      double s = x + y;
      if (s <= 1.0 && s > 0.0) return x / s;
    }
  }
  // X/(X+Y) with Marsaglia-Tsang gamma deviates.
  auto gamma_mt = [&rng](double shape) {
    // Marsaglia-Tsang; valid for shape >= 1.
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = sample_normal(rng);
      double v = 1.0 + c * x;
      if (v <= 0) continue;
      v = v * v * v;
      double u = rng.u01_positive();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
        return d * v;
      }
    }
  };
  auto gamma_any = [&](double shape) {
    if (shape >= 1.0) return gamma_mt(shape);
    // Boost shape < 1 with the u^(1/shape) scaling identity.
    double g = gamma_mt(shape + 1.0);
    return g * pow_positive(rng.u01_positive(), 1.0 / shape);
  };
  double x = gamma_any(alpha);
  double y = gamma_any(beta);
  return x / (x + y);
}

void DistinctSampler::draw(Pcg32& rng, std::uint32_t n, std::uint32_t k,
                           std::vector<std::uint32_t>& out) {
  if (perm_.size() != n) {
    perm_.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) perm_[i] = i;
  }
  swaps_.clear();
  out.clear();
  for (std::uint32_t i = 0; i < k; ++i) {
    std::uint32_t j = i + rng.bounded(n - i);
    std::swap(perm_[i], perm_[j]);
    swaps_.push_back(j);
    out.push_back(perm_[i]);
  }
  // Undo the swaps in reverse so perm_ is the identity again.
  for (std::uint32_t i = k; i-- > 0;) {
    std::swap(perm_[i], perm_[swaps_[i]]);
  }
}

}  // namespace radkit
