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

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "radkit/accounting.hpp"
#include "radkit/domain.hpp"
#include "radkit/random.hpp"

namespace radkit {

enum class MechanismKind { kGrr, kOue, kSs, kLaplace, kGaussian };

std::string to_string(MechanismKind kind);

enum class OutputKind { kRecord, kBits, kSubset, kReal };

// One mechanism output. `items` holds the set-bit positions for kBits and
// the subset members for kSubset; it is reused across samples to avoid
// per-trial allocation.
struct Output {
  OutputKind kind = OutputKind::kRecord;
  RecordId record = 0;
  double real = 0.0;
  std::vector<std::uint32_t> items;
};

// A local randomizer with an exact probability model. Immutable after
// construction; sampling draws only from the caller's stream, and
// likelihood evaluation is pure, so instances are safe to share across
// threads.
class Mechanism {
 public:
  virtual ~Mechanism() = default;

  virtual MechanismKind kind() const = 0;
  virtual std::size_t universe_size() const = 0;
  virtual double epsilon() const = 0;
  virtual double delta() const { return 0.0; }

  virtual void sample(RecordId z, Pcg32& rng, Output& out) const = 0;

  // Probability (discrete outputs) or density / endpoint-atom mass
  // (real outputs) of theta given input z. Throws std::domain_error when
  // theta is not a valid output.
  virtual double likelihood(const Output& theta, RecordId z) const = 0;

  virtual double total_variation() const = 0;
  virtual Tradeoff tradeoff() const = 0;

  virtual bool discrete_output() const = 0;

  // Exact enumeration support for discrete output spaces. output_count and
  // enumerate_outputs throw CapacityError when the space is continuous or
  // too large to enumerate.
  virtual std::uint64_t output_count() const;
  virtual void enumerate_outputs(
      const std::function<void(const Output&)>& fn) const;
};

// Generalized randomized response: reports the true record with probability
// p = e^eps / (e^eps + m - 1), any fixed other record with probability
// q = 1 / (e^eps + m - 1).
class GrrMechanism final : public Mechanism {
 public:
  GrrMechanism(std::size_t m, double eps);

  MechanismKind kind() const override { return MechanismKind::kGrr; }
  std::size_t universe_size() const override { return m_; }
  double epsilon() const override { return eps_; }
  double p() const { return p_; }
  double q() const { return q_; }

  void sample(RecordId z, Pcg32& rng, Output& out) const override;
  double likelihood(const Output& theta, RecordId z) const override;
  double total_variation() const override;
  Tradeoff tradeoff() const override { return Tradeoff::eps_delta(eps_, 0.0); }
  bool discrete_output() const override { return true; }
  std::uint64_t output_count() const override { return m_; }
  void enumerate_outputs(
      const std::function<void(const Output&)>& fn) const override;

 private:
  std::size_t m_;
  double eps_, p_, q_;
};

// Optimized unary encoding: a one-hot vector perturbed bitwise. The true
// position transmits 1 with probability 1/2; every other position with
// probability q = 1 / (e^eps + 1).
class OueMechanism final : public Mechanism {
 public:
  OueMechanism(std::size_t m, double eps);

  MechanismKind kind() const override { return MechanismKind::kOue; }
  std::size_t universe_size() const override { return m_; }
  double epsilon() const override { return eps_; }
  double p() const { return p_; }
  double q() const { return q_; }

  void sample(RecordId z, Pcg32& rng, Output& out) const override;
  double likelihood(const Output& theta, RecordId z) const override;
  double total_variation() const override;
  Tradeoff tradeoff() const override { return Tradeoff::eps_delta(eps_, 0.0); }
  bool discrete_output() const override { return true; }
  std::uint64_t output_count() const override;
  void enumerate_outputs(
      const std::function<void(const Output&)>& fn) const override;

 private:
  std::size_t m_;
  double eps_, p_, q_, log_p_, log_q_;
};

// Subset selection: reports a size-omega subset that contains the true
// value with probability p = omega e^eps / (omega e^eps + m - omega); the
// rest of the subset is uniform over the remaining records.
class SsMechanism final : public Mechanism {
 public:
  SsMechanism(std::size_t m, double eps);

  MechanismKind kind() const override { return MechanismKind::kSs; }
  std::size_t universe_size() const override { return m_; }
  double epsilon() const override { return eps_; }
  double p() const { return p_; }
  std::uint32_t omega() const { return omega_; }

  void sample(RecordId z, Pcg32& rng, Output& out) const override;
  double likelihood(const Output& theta, RecordId z) const override;
  double total_variation() const override;
  Tradeoff tradeoff() const override { return Tradeoff::eps_delta(eps_, 0.0); }
  bool discrete_output() const override { return true; }
  std::uint64_t output_count() const override;
  void enumerate_outputs(
      const std::function<void(const Output&)>& fn) const override;

 private:
  std::size_t m_;
  double eps_, p_;
  std::uint32_t omega_;
  double in_mass_, out_mass_;  // p / C(m-1, w-1) and (1-p) / C(m-1, w)
};

// Additive Laplace noise on the record's numeric embedding, with optional
// truncation applied as clamping post-processing. The clamped endpoints
// carry probability atoms, so interval probabilities are exposed through a
// CDF-difference evaluator.
class LaplaceMechanism final : public Mechanism {
 public:
  LaplaceMechanism(std::vector<double> values, double eps, double sensitivity,
                   std::optional<std::pair<double, double>> truncation);

  MechanismKind kind() const override { return MechanismKind::kLaplace; }
  std::size_t universe_size() const override { return values_.size(); }
  double epsilon() const override { return eps_; }
  double scale() const { return b_; }
  double sensitivity() const { return sensitivity_; }
  bool truncated() const { return truncated_; }

  void sample(RecordId z, Pcg32& rng, Output& out) const override;
  double likelihood(const Output& theta, RecordId z) const override;
  // P[lo <= output <= hi | z] including endpoint atoms.
  double interval_mass(double lo, double hi, RecordId z) const;
  double total_variation() const override;
  Tradeoff tradeoff() const override { return Tradeoff::eps_delta(eps_, 0.0); }
  bool discrete_output() const override { return false; }

 private:
  double cdf(double x, double center) const;

  std::vector<double> values_;
  double eps_, sensitivity_, b_;
  bool truncated_;
  double lo_ = 0.0, hi_ = 0.0;
};

// Additive Gaussian noise on the record's numeric embedding; mu-GDP with
// mu = sensitivity / sigma.
class GaussianMechanism final : public Mechanism {
 public:
  GaussianMechanism(std::vector<double> values, double sigma,
                    double sensitivity);

  MechanismKind kind() const override { return MechanismKind::kGaussian; }
  std::size_t universe_size() const override { return values_.size(); }
  // No single epsilon characterizes Gaussian noise; use tradeoff() or mu().
  double epsilon() const override {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double sigma() const { return sigma_; }
  double mu() const { return mu_; }
  double sensitivity() const { return sensitivity_; }

  void sample(RecordId z, Pcg32& rng, Output& out) const override;
  double likelihood(const Output& theta, RecordId z) const override;
  double total_variation() const override;
  Tradeoff tradeoff() const override { return Tradeoff::gaussian(mu_); }
  bool discrete_output() const override { return false; }

 private:
  std::vector<double> values_;
  double sigma_, sensitivity_, mu_;
};

// 1-D exponential mechanism on [0, 1] with utility u(z, theta) = -|z - theta|
// and scale s = 2 * sensitivity / eps. Continuous input and output; used by
// the nested Monte Carlo estimator.
class ExponentialMechanism1D {
 public:
  ExponentialMechanism1D(double eps, double sensitivity = 1.0);

  double epsilon() const { return eps_; }
  double scale() const { return s_; }
  double lower() const { return 0.0; }
  double upper() const { return 1.0; }

  double density(double theta, double z) const;
  // Density cap M = 1 / (s (1 - e^{-1/s})).
  double density_cap() const;
  double sample(double z, Pcg32& rng) const;

 private:
  double eps_, s_;
};

struct MechanismSpec {
  MechanismKind kind = MechanismKind::kGrr;
  std::size_t m = 0;
  double eps = 0.0;
  double delta = 0.0;
  double sigma = 0.0;
  double sensitivity = 1.0;
  std::optional<std::pair<double, double>> truncation;
};

// Builds a mechanism over the given universe. Laplace and Gaussian require
// the universe's numeric embedding.
std::unique_ptr<Mechanism> make_mechanism(const MechanismSpec& spec,
                                          const Universe& universe);

}  // namespace radkit
