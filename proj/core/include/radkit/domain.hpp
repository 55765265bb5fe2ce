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
#include <optional>
#include <string>
#include <vector>

#include "radkit/random.hpp"

namespace radkit {

using RecordId = std::uint32_t;

// Finite record universe Z. Records are ordered and pairwise distinct.
// An optional numeric embedding assigns one real value per record and is
// required by metric error functions. An optional field schema supports
// attribute-projection auxiliary maps.
class Universe {
 public:
  // Records "lo".."hi" with embedding value = integer value.
  static Universe integer_range(long lo, long hi);
  // Records "0".."m-1" with embedding value = index.
  static Universe indexed(std::size_t m);
  static Universe categorical(std::vector<std::string> ids);
  static Universe categorical_embedded(std::vector<std::string> ids,
                                       std::vector<double> embedding);
  // Records with named categorical fields; the identifier is the
  // '|'-joined field tuple.
  static Universe with_fields(std::vector<std::string> field_names,
                              std::vector<std::vector<std::string>> rows);

  std::size_t size() const { return ids_.size(); }
  const std::string& id(RecordId i) const { return ids_[i]; }
  std::optional<RecordId> index_of(const std::string& id) const;

  bool has_embedding() const { return !embedding_.empty(); }
  double embedding(RecordId i) const { return embedding_[i]; }
  const std::vector<double>& embedding() const { return embedding_; }

  bool has_fields() const { return !field_names_.empty(); }
  std::size_t field_count() const { return field_names_.size(); }
  const std::vector<std::string>& field_names() const { return field_names_; }
  const std::string& field_value(RecordId i, std::size_t f) const {
    return fields_[i][f];
  }

 private:
  Universe() = default;
  void validate() const;

  std::vector<std::string> ids_;
  std::vector<double> embedding_;
  std::vector<std::string> field_names_;
  std::vector<std::vector<std::string>> fields_;
};

// Probability mass function over a Universe. Weights built from counts keep
// the exact integer representation; weight(i) is then num/denom evaluated in
// double, and the weights sum to 1 exactly by construction.
class DiscretePrior {
 public:
  static DiscretePrior uniform(std::size_t m);
  static DiscretePrior from_weights(std::vector<double> weights);
  static DiscretePrior from_counts(std::vector<std::uint64_t> counts);
  // Mass 1/2 on each of two records, 0 elsewhere.
  static DiscretePrior two_point(std::size_t m, RecordId a, RecordId b);

  std::size_t size() const { return weights_.size(); }
  double weight(RecordId i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  bool from_exact_counts() const { return !counts_.empty(); }
  bool is_uniform() const;

 private:
  DiscretePrior() = default;
  std::vector<double> weights_;
  std::vector<std::uint64_t> counts_;
};

// Continuous prior on an interval; supports the uniform and beta families.
class ContinuousPrior {
 public:
  enum class Kind { kUniform, kBeta };

  static ContinuousPrior uniform(double lo, double hi);
  static ContinuousPrior beta(double alpha, double beta);

  Kind kind() const { return kind_; }
  double lower() const { return lo_; }
  double upper() const { return hi_; }
  double alpha() const { return alpha_; }
  double beta_param() const { return beta_; }

  double density(double z) const;
  double sample(Pcg32& rng) const;
  // P[lo <= Z <= hi], clipped to the support.
  double interval_mass(double lo, double hi) const;

 private:
  ContinuousPrior() = default;
  Kind kind_ = Kind::kUniform;
  double lo_ = 0.0, hi_ = 1.0;
  double alpha_ = 1.0, beta_ = 1.0;
  double log_norm_ = 0.0;  // log B(alpha, beta) for the beta family
};

enum class ErrorKind { kExactMatch, kAbsoluteDifference };

// Error function ell and success threshold eta. ell(z, z) = 0 always, so the
// success set S_eta(z) contains z for any eta >= 0.
class ErrorModel {
 public:
  ErrorModel(ErrorKind kind, double eta);

  ErrorKind kind() const { return kind_; }
  double eta() const { return eta_; }

  // Throws ConfigError if the kind needs an embedding the universe lacks.
  void check_compatible(const Universe& u) const;

  double error(const Universe& u, RecordId a, RecordId b) const;
  bool success(const Universe& u, RecordId target, RecordId guess) const {
    if (kind_ == ErrorKind::kExactMatch) {
      return target == guess || eta_ >= 1.0;
    }
    double d = u.embedding(target) - u.embedding(guess);
    return (d < 0 ? -d : d) <= eta_;
  }

 private:
  ErrorKind kind_;
  double eta_;
};

enum class AuxMode { kNone, kFull, kAttribute };

// Auxiliary-knowledge map a: Z -> aux. The fibers a^{-1}(x) partition Z.
class AuxMap {
 public:
  static AuxMap none(const Universe& u);
  static AuxMap full(const Universe& u);
  static AuxMap attribute(const Universe& u,
                          const std::vector<std::string>& field_names);

  AuxMode mode() const { return mode_; }
  std::size_t fiber_count() const { return fibers_.size(); }
  int value_of(RecordId z) const { return value_of_[z]; }
  const std::vector<RecordId>& fiber(int aux_value) const {
    return fibers_[aux_value];
  }
  const std::string& value_label(int aux_value) const {
    return labels_[aux_value];
  }

 private:
  AuxMap() = default;
  AuxMode mode_ = AuxMode::kNone;
  std::vector<int> value_of_;
  std::vector<std::vector<RecordId>> fibers_;
  std::vector<std::string> labels_;
};

struct ThreatModel {
  ErrorModel error;
  AuxMap aux;
};

// kappa_pi = Pr[Z = Z'] for Z, Z' iid from the prior.
double kappa_pi(const DiscretePrior& prior);

// kappa^+ = max over candidates z0 of Pr[ell(z0, Z) <= eta]; kappa^- is the
// min counterpart.
double kappa_plus(const Universe& u, const DiscretePrior& prior,
                  const ErrorModel& error);
double kappa_minus(const Universe& u, const DiscretePrior& prior,
                   const ErrorModel& error);

// Continuous counterpart of kappa^+ for the absolute-difference error:
// sup_x P[|Z - x| <= eta], located numerically.
double kappa_plus_continuous(const ContinuousPrior& prior, double eta);

// Normalized frequency vector of categorical observations over a universe.
// Throws IngestError on empty input or observations outside the universe.
DiscretePrior empirical_prior(const std::vector<std::string>& values,
                              const Universe& u);

}  // namespace radkit
