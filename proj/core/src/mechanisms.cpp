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

#include "radkit/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "radkit/errors.hpp"
#include "radkit/stats.hpp"

namespace radkit {

std::string to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kGrr:
      return "grr";
    case MechanismKind::kOue:
      return "oue";
    case MechanismKind::kSs:
      return "ss";
    case MechanismKind::kLaplace:
      return "laplace";
    case MechanismKind::kGaussian:
      return "gaussian";
  }
  return "unknown";
}

std::uint64_t Mechanism::output_count() const {
  throw CapacityError("mechanism output space is not enumerable");
}

void Mechanism::enumerate_outputs(
    const std::function<void(const Output&)>&) const {
  throw CapacityError("mechanism output space is not enumerable");
}

namespace {

void check_eps(double eps) {
  if (eps < 0 || !std::isfinite(eps)) {
    throw ConfigError("epsilon must be finite and nonnegative");
  }
}

void check_universe_size(std::size_t m) {
  if (m < 2) throw ConfigError("universe size must be at least 2");
}

double binomial_coefficient(std::uint32_t n, std::uint32_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::uint32_t i = 1; i <= k; ++i) {
    r *= static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

}  // namespace

//===----------------------------------------------------------------------===//
// GRR
//===----------------------------------------------------------------------===//

GrrMechanism::GrrMechanism(std::size_t m, double eps) : m_(m), eps_(eps) {
  check_universe_size(m);
  check_eps(eps);
  // p = e^eps / (e^eps + m - 1) computed through e^{-eps} so that large
  // budgets do not overflow.
  double ee = std::exp(-eps);
  double denom = 1.0 + static_cast<double>(m - 1) * ee;
  p_ = 1.0 / denom;
  q_ = ee / denom;
}

void GrrMechanism::sample(RecordId z, Pcg32& rng, Output& out) const {
  out.kind = OutputKind::kRecord;
  if (rng.u01() < p_) {
    out.record = z;
    return;
  }
  std::uint32_t r = rng.bounded(static_cast<std::uint32_t>(m_) - 1);
  out.record = r >= z ? r + 1 : r;
}

double GrrMechanism::likelihood(const Output& theta, RecordId z) const {
  if (theta.kind != OutputKind::kRecord || theta.record >= m_) {
    throw std::domain_error("GRR output must be a record in the universe");
  }
  return theta.record == z ? p_ : q_;
}

double GrrMechanism::total_variation() const {
  double ee = std::exp(-eps_);
  return (1.0 - ee) / (1.0 + static_cast<double>(m_ - 1) * ee);
}

void GrrMechanism::enumerate_outputs(
    const std::function<void(const Output&)>& fn) const {
  Output out;
  out.kind = OutputKind::kRecord;
  for (RecordId r = 0; r < m_; ++r) {
    out.record = r;
    fn(out);
  }
}

//===----------------------------------------------------------------------===//
// OUE
//===----------------------------------------------------------------------===//

OueMechanism::OueMechanism(std::size_t m, double eps) : m_(m), eps_(eps) {
  check_universe_size(m);
  check_eps(eps);
  double ee = std::exp(-eps);
  q_ = ee / (1.0 + ee);
  p_ = 1.0 / (1.0 + ee);
  log_p_ = std::log(p_);
  log_q_ = std::log(q_);
}

void OueMechanism::sample(RecordId z, Pcg32& rng, Output& out) const {
  out.kind = OutputKind::kBits;
  out.items.clear();
  // Set-bit positions only: the count among the m-1 non-true positions is
  // Binomial(m-1, q), and the positions are uniform without replacement.
  std::uint32_t others =
      sample_binomial(rng, static_cast<std::uint32_t>(m_) - 1, q_);
  static thread_local DistinctSampler sampler;
  static thread_local std::vector<std::uint32_t> positions;
  sampler.draw(rng, static_cast<std::uint32_t>(m_) - 1, others, positions);
  for (std::uint32_t r : positions) {
    out.items.push_back(r >= z ? r + 1 : r);
  }
  if (rng.bernoulli(0.5)) out.items.push_back(z);
}

double OueMechanism::likelihood(const Output& theta, RecordId z) const {
  if (theta.kind != OutputKind::kBits) {
    throw std::domain_error("OUE output must be a bit vector");
  }
  std::uint32_t ones = 0;
  bool bit_z = false;
  for (std::uint32_t i : theta.items) {
    if (i >= m_) throw std::domain_error("OUE bit position out of range");
    ++ones;
    if (i == z) bit_z = true;
  }
  std::uint32_t ones_other = ones - (bit_z ? 1u : 0u);
  std::uint32_t zeros_other = static_cast<std::uint32_t>(m_) - 1 - ones_other;
  // Product over m-1 independent biased bits and the fair true bit, in log
  // space to stay finite for universes with thousands of positions.
  double log_pmf = -std::numbers::ln2 + ones_other * log_q_ +
                   zeros_other * log_p_;
  return std::exp(log_pmf);
}

double OueMechanism::total_variation() const {
  double ee = std::exp(-eps_);
  return 0.5 * (1.0 - ee) / (1.0 + ee);
}

std::uint64_t OueMechanism::output_count() const {
  if (m_ > 20) {
    throw CapacityError(
        "OUE output space has 2^m elements; enumeration is limited to m <= "
        "20. Use the closed-form bound instead.");
  }
  return std::uint64_t{1} << m_;
}

void OueMechanism::enumerate_outputs(
    const std::function<void(const Output&)>& fn) const {
  std::uint64_t total = output_count();
  Output out;
  out.kind = OutputKind::kBits;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    out.items.clear();
    for (std::uint32_t i = 0; i < m_; ++i) {
      if (mask & (std::uint64_t{1} << i)) out.items.push_back(i);
    }
    fn(out);
  }
}

//===----------------------------------------------------------------------===//
// Subset selection
//===----------------------------------------------------------------------===//

SsMechanism::SsMechanism(std::size_t m, double eps) : m_(m), eps_(eps) {
  check_universe_size(m);
  check_eps(eps);
  double ee = std::exp(-eps);
  // omega = max(1, floor(m / (e^eps + 1))); the small slack keeps exact
  // integer ratios (e.g. m = 10, eps = ln 4) from rounding down.
  double ratio = static_cast<double>(m) * ee / (1.0 + ee);
  double w = std::floor(ratio + 1e-9);
  omega_ = static_cast<std::uint32_t>(std::max(1.0, w));
  double dm = static_cast<double>(m);
  double dw = static_cast<double>(omega_);
  p_ = dw / (dw + (dm - dw) * ee);
  in_mass_ = p_ / binomial_coefficient(static_cast<std::uint32_t>(m_) - 1,
                                       omega_ - 1);
  out_mass_ = (1.0 - p_) /
              binomial_coefficient(static_cast<std::uint32_t>(m_) - 1, omega_);
}

void SsMechanism::sample(RecordId z, Pcg32& rng, Output& out) const {
  out.kind = OutputKind::kSubset;
  out.items.clear();
  static thread_local DistinctSampler sampler;
  static thread_local std::vector<std::uint32_t> others;
  bool include = rng.u01() < p_;
  std::uint32_t fill = include ? omega_ - 1 : omega_;
  sampler.draw(rng, static_cast<std::uint32_t>(m_) - 1, fill, others);
  for (std::uint32_t r : others) {
    out.items.push_back(r >= z ? r + 1 : r);
  }
  if (include) out.items.push_back(z);
}

double SsMechanism::likelihood(const Output& theta, RecordId z) const {
  if (theta.kind != OutputKind::kSubset || theta.items.size() != omega_) {
    throw std::domain_error("SS output must be a subset of size omega");
  }
  for (std::uint32_t i : theta.items) {
    if (i >= m_) throw std::domain_error("SS subset member out of range");
    if (i == z) return in_mass_;
  }
  return out_mass_;
}

double SsMechanism::total_variation() const {
  // Generic (eps, 0) bound via the trade-off function.
  double ee = std::exp(-eps_);
  return (1.0 - ee) / (1.0 + ee);
}

std::uint64_t SsMechanism::output_count() const {
  double count = binomial_coefficient(static_cast<std::uint32_t>(m_), omega_);
  if (count > 1e7) {
    throw CapacityError(
        "SS output space is too large to enumerate; use the closed-form "
        "bound instead.");
  }
  return static_cast<std::uint64_t>(count + 0.5);
}

void SsMechanism::enumerate_outputs(
    const std::function<void(const Output&)>& fn) const {
  output_count();  // capacity check
  Output out;
  out.kind = OutputKind::kSubset;
  std::vector<std::uint32_t> comb(omega_);
  for (std::uint32_t i = 0; i < omega_; ++i) comb[i] = i;
  std::uint32_t m = static_cast<std::uint32_t>(m_);
  for (;;) {
    out.items.assign(comb.begin(), comb.end());
    fn(out);
    // Next lexicographic combination.
    int i = static_cast<int>(omega_) - 1;
    while (i >= 0 && comb[i] == m - omega_ + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (std::uint32_t j = i + 1; j < omega_; ++j) comb[j] = comb[j - 1] + 1;
  }
}

//===----------------------------------------------------------------------===//
// Laplace
//===----------------------------------------------------------------------===//

LaplaceMechanism::LaplaceMechanism(
    std::vector<double> values, double eps, double sensitivity,
    std::optional<std::pair<double, double>> truncation)
    : values_(std::move(values)),
      eps_(eps),
      sensitivity_(sensitivity),
      truncated_(truncation.has_value()) {
  check_universe_size(values_.size());
  if (!(eps > 0)) throw ConfigError("Laplace mechanism needs epsilon > 0");
  if (!(sensitivity > 0)) throw ConfigError("sensitivity must be positive");
  b_ = sensitivity / eps;
  if (truncated_) {
    lo_ = truncation->first;
    hi_ = truncation->second;
    if (!(hi_ > lo_)) throw ConfigError("truncation interval is empty");
  }
}

void LaplaceMechanism::sample(RecordId z, Pcg32& rng, Output& out) const {
  out.kind = OutputKind::kReal;
  double v = values_[z] + sample_laplace(rng, b_);
  if (truncated_) v = std::clamp(v, lo_, hi_);
  out.real = v;
}

double LaplaceMechanism::cdf(double x, double center) const {
  double d = (x - center) / b_;
  if (d < 0) return 0.5 * std::exp(d);
  return 1.0 - 0.5 * std::exp(-d);
}

double LaplaceMechanism::likelihood(const Output& theta, RecordId z) const {
  if (theta.kind != OutputKind::kReal) {
    throw std::domain_error("Laplace output must be a real value");
  }
  double x = theta.real;
  double center = values_[z];
  if (truncated_) {
    if (x < lo_ || x > hi_) {
      throw std::domain_error("output outside the truncation interval");
    }
    // Clamping piles the tail mass into atoms at the interval endpoints.
    if (x == lo_) return cdf(lo_, center);
    if (x == hi_) return 1.0 - cdf(hi_, center);
  }
  return 0.5 / b_ * std::exp(-std::fabs(x - center) / b_);
}

double LaplaceMechanism::interval_mass(double lo, double hi,
                                       RecordId z) const {
  double center = values_[z];
  if (truncated_) {
    lo = std::max(lo, lo_);
    hi = std::min(hi, hi_);
    if (hi < lo) return 0.0;
    double mass = cdf(hi, center) - cdf(lo, center);
    if (lo == lo_) mass += cdf(lo_, center);
    if (hi == hi_) mass += 1.0 - cdf(hi_, center);
    return mass;
  }
  if (hi < lo) return 0.0;
  return cdf(hi, center) - cdf(lo, center);
}

double LaplaceMechanism::total_variation() const {
  double ee = std::exp(-eps_);
  return (1.0 - ee) / (1.0 + ee);
}

//===----------------------------------------------------------------------===//
// Gaussian
//===----------------------------------------------------------------------===//

GaussianMechanism::GaussianMechanism(std::vector<double> values, double sigma,
                                     double sensitivity)
    : values_(std::move(values)), sigma_(sigma), sensitivity_(sensitivity) {
  check_universe_size(values_.size());
  if (!(sigma > 0)) throw ConfigError("Gaussian mechanism needs sigma > 0");
  if (!(sensitivity > 0)) throw ConfigError("sensitivity must be positive");
  mu_ = sensitivity_ / sigma_;
}

void GaussianMechanism::sample(RecordId z, Pcg32& rng, Output& out) const {
  out.kind = OutputKind::kReal;
  out.real = values_[z] + sigma_ * sample_normal(rng);
}

double GaussianMechanism::likelihood(const Output& theta, RecordId z) const {
  if (theta.kind != OutputKind::kReal) {
    throw std::domain_error("Gaussian output must be a real value");
  }
  double d = (theta.real - values_[z]) / sigma_;
  constexpr double kInvSqrt2Pi = 0.3989422804014326779;
  return kInvSqrt2Pi / sigma_ * std::exp(-0.5 * d * d);
}

double GaussianMechanism::total_variation() const {
  return 2.0 * norm_cdf(mu_ / 2.0) - 1.0;
}

//===----------------------------------------------------------------------===//
// Exponential mechanism on [0, 1]
//===----------------------------------------------------------------------===//

ExponentialMechanism1D::ExponentialMechanism1D(double eps, double sensitivity)
    : eps_(eps) {
  if (!(eps > 0)) throw ConfigError("exponential mechanism needs epsilon > 0");
  if (!(sensitivity > 0)) throw ConfigError("sensitivity must be positive");
  s_ = 2.0 * sensitivity / eps;
}

double ExponentialMechanism1D::density(double theta, double z) const {
  if (theta < 0.0 || theta > 1.0 || z < 0.0 || z > 1.0) {
    throw std::domain_error("exponential mechanism operates on [0, 1]");
  }
  // Normalizer over theta: s (2 - e^{-z/s} - e^{-(1-z)/s}).
  double norm = s_ * (2.0 - std::exp(-z / s_) - std::exp(-(1.0 - z) / s_));
  return std::exp(-std::fabs(theta - z) / s_) / norm;
}

double ExponentialMechanism1D::density_cap() const {
  return 1.0 / (s_ * (1.0 - std::exp(-1.0 / s_)));
}

double ExponentialMechanism1D::sample(double z, Pcg32& rng) const {
  // Piecewise inverse CDF: choose the side of z by its mass, then invert the
  // truncated exponential on that side.
  double mass_left = s_ * (1.0 - std::exp(-z / s_));
  double mass_right = s_ * (1.0 - std::exp(-(1.0 - z) / s_));
  double total = mass_left + mass_right;
  double u = rng.u01() * total;
  if (u < mass_left) {
    // theta in [0, z]: mass from theta to z is s(1 - e^{-(z-theta)/s}).
    double t = -s_ * std::log(1.0 - u / s_);
    return z - t;
  }
  double v = u - mass_left;
  double t = -s_ * std::log(1.0 - v / s_);
  return z + t;
}

std::unique_ptr<Mechanism> make_mechanism(const MechanismSpec& spec,
                                          const Universe& universe) {
  switch (spec.kind) {
    case MechanismKind::kGrr:
      return std::make_unique<GrrMechanism>(universe.size(), spec.eps);
    case MechanismKind::kOue:
      return std::make_unique<OueMechanism>(universe.size(), spec.eps);
    case MechanismKind::kSs:
      return std::make_unique<SsMechanism>(universe.size(), spec.eps);
    case MechanismKind::kLaplace:
      if (!universe.has_embedding()) {
        throw ConfigError("Laplace mechanism needs a numeric embedding");
      }
      return std::make_unique<LaplaceMechanism>(
          universe.embedding(), spec.eps, spec.sensitivity, spec.truncation);
    case MechanismKind::kGaussian:
      if (!universe.has_embedding()) {
        throw ConfigError("Gaussian mechanism needs a numeric embedding");
      }
      return std::make_unique<GaussianMechanism>(universe.embedding(),
                                                 spec.sigma, spec.sensitivity);
  }
  throw ConfigError("unknown mechanism kind");
}

}  // namespace radkit
