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

#include "radkit/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "radkit/errors.hpp"
#include "radkit/stats.hpp"

namespace radkit {

namespace {
constexpr double kWeightSumTolerance = 1e-12;
}

Universe Universe::integer_range(long lo, long hi) {
  if (hi < lo) throw ConfigError("integer_range: hi < lo");
  Universe u;
  for (long v = lo; v <= hi; ++v) {
    u.ids_.push_back(std::to_string(v));
    u.embedding_.push_back(static_cast<double>(v));
  }
  u.validate();
  return u;
}

Universe Universe::indexed(std::size_t m) {
  return integer_range(0, static_cast<long>(m) - 1);
}

Universe Universe::categorical(std::vector<std::string> ids) {
  Universe u;
  u.ids_ = std::move(ids);
  u.validate();
  return u;
}

Universe Universe::categorical_embedded(std::vector<std::string> ids,
                                        std::vector<double> embedding) {
  if (ids.size() != embedding.size()) {
    throw ConfigError("embedding must assign exactly one value per record");
  }
  Universe u;
  u.ids_ = std::move(ids);
  u.embedding_ = std::move(embedding);
  u.validate();
  return u;
}

Universe Universe::with_fields(std::vector<std::string> field_names,
                               std::vector<std::vector<std::string>> rows) {
  if (field_names.empty()) throw ConfigError("field schema is empty");
  Universe u;
  for (const auto& row : rows) {
    if (row.size() != field_names.size()) {
      throw ConfigError("record does not match the field schema");
    }
    std::string id;
    for (std::size_t f = 0; f < row.size(); ++f) {
      if (f > 0) id += '|';
      id += row[f];
    }
    u.ids_.push_back(std::move(id));
  }
  u.field_names_ = std::move(field_names);
  u.fields_ = std::move(rows);
  u.validate();
  return u;
}

void Universe::validate() const {
  if (ids_.size() < 2) throw ConfigError("universe needs at least 2 records");
  std::unordered_set<std::string> seen;
  for (const auto& id : ids_) {
    if (!seen.insert(id).second) {
      throw ConfigError("duplicate record identifier: " + id);
    }
  }
  if (!embedding_.empty() && embedding_.size() != ids_.size()) {
    throw ConfigError("embedding must assign exactly one value per record");
  }
}

std::optional<RecordId> Universe::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] == id) return static_cast<RecordId>(i);
  }
  return std::nullopt;
}

DiscretePrior DiscretePrior::uniform(std::size_t m) {
  std::vector<std::uint64_t> counts(m, 1);
  return from_counts(std::move(counts));
}

DiscretePrior DiscretePrior::from_weights(std::vector<double> weights) {
  if (weights.empty()) throw ConfigError("prior has no weights");
  double sum = kahan_sum(weights);
  if (!(sum > 0)) throw ConfigError("prior weights must have positive sum");
  for (double& w : weights) {
    if (w < 0) throw ConfigError("prior weights must be nonnegative");
    w /= sum;
  }
  if (std::fabs(kahan_sum(weights) - 1.0) > kWeightSumTolerance) {
    throw ConfigError("prior weights do not sum to 1");
  }
  DiscretePrior p;
  p.weights_ = std::move(weights);
  return p;
}

DiscretePrior DiscretePrior::from_counts(std::vector<std::uint64_t> counts) {
  if (counts.empty()) throw ConfigError("prior has no counts");
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  if (total == 0) throw ConfigError("prior counts are all zero");
  DiscretePrior p;
  p.weights_.reserve(counts.size());
  for (std::uint64_t c : counts) {
    p.weights_.push_back(static_cast<double>(c) / static_cast<double>(total));
  }
  p.counts_ = std::move(counts);
  return p;
}

DiscretePrior DiscretePrior::two_point(std::size_t m, RecordId a, RecordId b) {
  if (a >= m || b >= m || a == b) {
    throw ConfigError("two_point prior needs two distinct records");
  }
  std::vector<std::uint64_t> counts(m, 0);
  counts[a] = 1;
  counts[b] = 1;
  return from_counts(std::move(counts));
}

bool DiscretePrior::is_uniform() const {
  double w0 = weights_.front();
  for (double w : weights_) {
    if (std::fabs(w - w0) > 1e-15) return false;
  }
  return true;
}

ContinuousPrior ContinuousPrior::uniform(double lo, double hi) {
  if (!(hi > lo)) throw ConfigError("uniform prior needs hi > lo");
  ContinuousPrior p;
  p.kind_ = Kind::kUniform;
  p.lo_ = lo;
  p.hi_ = hi;
  return p;
}

ContinuousPrior ContinuousPrior::beta(double alpha, double beta) {
  if (!(alpha > 0) || !(beta > 0)) {
    throw ConfigError("beta prior needs positive shape parameters");
  }
  ContinuousPrior p;
  p.kind_ = Kind::kBeta;
  p.lo_ = 0.0;
  p.hi_ = 1.0;
  p.alpha_ = alpha;
  p.beta_ = beta;
  p.log_norm_ = std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
  return p;
}

double ContinuousPrior::density(double z) const {
  if (z < lo_ || z > hi_) return 0.0;
  if (kind_ == Kind::kUniform) return 1.0 / (hi_ - lo_);
  if (z <= 0.0 || z >= 1.0) {
    // The beta(a<1, b<1) density diverges at the endpoints; evaluations are
    // only requested at interior points, but stay finite defensively.
    z = std::min(std::max(z, 1e-300), 1.0 - 1e-16);
  }
  return std::exp((alpha_ - 1.0) * std::log(z) + (beta_ - 1.0) * std::log1p(-z) -
                  log_norm_);
}

double ContinuousPrior::sample(Pcg32& rng) const {
  if (kind_ == Kind::kUniform) return lo_ + (hi_ - lo_) * rng.u01();
  return sample_beta(rng, alpha_, beta_);
}

namespace {

// Regularized incomplete beta I_x(a, b) by the standard continued fraction
// (Lentz's method).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

double inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_bt = a * std::log(x) + b * std::log1p(-x) -
                 (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return bt * beta_cf(a, b, x) / a;
  }
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace

double ContinuousPrior::interval_mass(double lo, double hi) const {
  lo = std::max(lo, lo_);
  hi = std::min(hi, hi_);
  if (hi <= lo) return 0.0;
  if (kind_ == Kind::kUniform) return (hi - lo) / (hi_ - lo_);
  return inc_beta(alpha_, beta_, hi) - inc_beta(alpha_, beta_, lo);
}

ErrorModel::ErrorModel(ErrorKind kind, double eta) : kind_(kind), eta_(eta) {
  if (eta < 0) throw ConfigError("error threshold eta must be nonnegative");
}

void ErrorModel::check_compatible(const Universe& u) const {
  if (kind_ == ErrorKind::kAbsoluteDifference && !u.has_embedding()) {
    throw ConfigError(
        "absolute-difference error needs a numeric embedding on the universe");
  }
}

double ErrorModel::error(const Universe& u, RecordId a, RecordId b) const {
  if (kind_ == ErrorKind::kExactMatch) return a == b ? 0.0 : 1.0;
  return std::fabs(u.embedding(a) - u.embedding(b));
}

AuxMap AuxMap::none(const Universe& u) {
  AuxMap a;
  a.mode_ = AuxMode::kNone;
  a.value_of_.assign(u.size(), 0);
  a.fibers_.resize(1);
  for (RecordId z = 0; z < u.size(); ++z) a.fibers_[0].push_back(z);
  a.labels_ = {""};
  return a;
}

AuxMap AuxMap::full(const Universe& u) {
  AuxMap a;
  a.mode_ = AuxMode::kFull;
  a.value_of_.resize(u.size());
  a.fibers_.resize(u.size());
  a.labels_.resize(u.size());
  for (RecordId z = 0; z < u.size(); ++z) {
    a.value_of_[z] = static_cast<int>(z);
    a.fibers_[z] = {z};
    a.labels_[z] = u.id(z);
  }
  return a;
}

AuxMap AuxMap::attribute(const Universe& u,
                         const std::vector<std::string>& field_names) {
  if (!u.has_fields()) {
    throw ConfigError("attribute aux map needs a universe with a field schema");
  }
  std::vector<std::size_t> indices;
  for (const auto& name : field_names) {
    auto it = std::find(u.field_names().begin(), u.field_names().end(), name);
    if (it == u.field_names().end()) {
      throw ConfigError("unknown field in attribute aux map: " + name);
    }
    indices.push_back(
        static_cast<std::size_t>(it - u.field_names().begin()));
  }
  if (indices.empty()) throw ConfigError("attribute aux map with no fields");

  AuxMap a;
  a.mode_ = AuxMode::kAttribute;
  a.value_of_.resize(u.size());
  std::map<std::string, int> value_index;
  for (RecordId z = 0; z < u.size(); ++z) {
    std::string key;
    for (std::size_t f : indices) {
      key += u.field_value(z, f);
      key += '|';
    }
    auto [it, inserted] = value_index.emplace(key, static_cast<int>(a.fibers_.size()));
    if (inserted) {
      a.fibers_.emplace_back();
      a.labels_.push_back(key.substr(0, key.size() - 1));
    }
    a.value_of_[z] = it->second;
    a.fibers_[it->second].push_back(z);
  }
  return a;
}

double kappa_pi(const DiscretePrior& prior) {
  std::vector<double> sq;
  sq.reserve(prior.size());
  for (double w : prior.weights()) sq.push_back(w * w);
  return kahan_sum(sq);
}

namespace {

// Prior mass of the success set of candidate z0.
double success_mass(const Universe& u, const DiscretePrior& prior,
                    const ErrorModel& error, RecordId z0) {
  double mass = 0.0;
  for (RecordId z = 0; z < u.size(); ++z) {
    if (error.success(u, z0, z)) mass += prior.weight(z);
  }
  return mass;
}

}  // namespace

double kappa_plus(const Universe& u, const DiscretePrior& prior,
                  const ErrorModel& error) {
  error.check_compatible(u);
  double best = -1.0;
  for (RecordId z0 = 0; z0 < u.size(); ++z0) {
    best = std::max(best, success_mass(u, prior, error, z0));
  }
  return best;
}

double kappa_minus(const Universe& u, const DiscretePrior& prior,
                   const ErrorModel& error) {
  error.check_compatible(u);
  double worst = std::numeric_limits<double>::infinity();
  for (RecordId z0 = 0; z0 < u.size(); ++z0) {
    worst = std::min(worst, success_mass(u, prior, error, z0));
  }
  return worst;
}

double kappa_plus_continuous(const ContinuousPrior& prior, double eta) {
  if (eta <= 0) return 0.0;
  auto mass = [&](double x) { return prior.interval_mass(x - eta, x + eta); };
  // Coarse scan, then golden-section refinement around the best cell.
  constexpr int kGrid = 2048;
  double lo = prior.lower(), hi = prior.upper();
  double best_x = lo, best = -1.0;
  for (int i = 0; i <= kGrid; ++i) {
    double x = lo + (hi - lo) * i / kGrid;
    double v = mass(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  double step = (hi - lo) / kGrid;
  double a = std::max(lo, best_x - step), b = std::min(hi, best_x + step);
  double x = golden_section_max(mass, a, b, 1e-12);
  return std::max(best, mass(x));
}

DiscretePrior empirical_prior(const std::vector<std::string>& values,
                              const Universe& u) {
  if (values.empty()) throw IngestError("empty input");
  std::unordered_map<std::string, RecordId> index;
  index.reserve(u.size());
  for (RecordId z = 0; z < u.size(); ++z) index.emplace(u.id(z), z);

  std::vector<std::uint64_t> counts(u.size(), 0);
  std::vector<std::size_t> bad_rows;
  for (std::size_t row = 0; row < values.size(); ++row) {
    auto it = index.find(values[row]);
    if (it == index.end()) {
      bad_rows.push_back(row + 1);
    } else {
      ++counts[it->second];
    }
  }
  if (!bad_rows.empty()) {
    std::string msg = "observations outside the universe at rows:";
    std::size_t shown = std::min<std::size_t>(bad_rows.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
      msg += ' ' + std::to_string(bad_rows[i]);
    }
    if (bad_rows.size() > shown) {
      msg += " (+" + std::to_string(bad_rows.size() - shown) + " more)";
    }
    throw IngestError(msg, std::move(bad_rows));
  }
  return DiscretePrior::from_counts(std::move(counts));
}

}  // namespace radkit
