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

#include "radkit/attacks.hpp"

#include <algorithm>
#include <cmath>

#include "radkit/errors.hpp"

namespace radkit {

void compute_weight_table(const Mechanism& mech, const DiscretePrior& prior,
                          const Output& theta, WeightTable& table) {
  std::size_t m = mech.universe_size();
  table.weights.resize(m);
  double marginal = 0.0;
  for (RecordId z = 0; z < m; ++z) {
    double like = mech.likelihood(theta, z);
    table.weights[z] = like;
    marginal += like * prior.weight(z);
  }
  table.marginal = marginal;
  for (RecordId z = 0; z < m; ++z) table.weights[z] -= marginal;
}

namespace {

// Uniform pick from a non-empty candidate list.
RecordId pick_uniform(const std::vector<RecordId>& set, Pcg32& rng) {
  if (set.size() == 1) return set[0];
  return set[rng.bounded(static_cast<std::uint32_t>(set.size()))];
}

void uniform_distribution(const std::vector<RecordId>& set,
                          std::vector<std::pair<RecordId, double>>& out) {
  out.clear();
  double p = 1.0 / static_cast<double>(set.size());
  for (RecordId z : set) out.emplace_back(z, p);
}

}  // namespace

//===----------------------------------------------------------------------===//
// OptimalAttack
//===----------------------------------------------------------------------===//

OptimalAttack::OptimalAttack(const Mechanism& mech, const Universe& universe,
                             const DiscretePrior& prior,
                             const ThreatModel& threat)
    : mech_(mech), universe_(universe), prior_(prior), threat_(threat) {
  threat_.error.check_compatible(universe);
  std::size_t m = universe.size();
  by_embedding_.resize(m);
  for (RecordId z = 0; z < m; ++z) by_embedding_[z] = z;
  if (universe.has_embedding()) {
    std::stable_sort(by_embedding_.begin(), by_embedding_.end(),
                     [&](RecordId a, RecordId b) {
                       return universe.embedding(a) < universe.embedding(b);
                     });
  }
  fiber_sorted_.resize(threat_.aux.fiber_count());
  for (std::size_t x = 0; x < threat_.aux.fiber_count(); ++x) {
    fiber_sorted_[x] = threat_.aux.fiber(static_cast<int>(x));
    if (universe.has_embedding()) {
      std::stable_sort(fiber_sorted_[x].begin(), fiber_sorted_[x].end(),
                       [&](RecordId a, RecordId b) {
                         return universe.embedding(a) < universe.embedding(b);
                       });
    }
  }
  // Record-valued outputs have only m distinct values, so the whole attack
  // table can be precomputed; respond() becomes a lookup.
  if (mech.discrete_output() && mech.kind() == MechanismKind::kGrr) {
    record_memo_.resize(threat_.aux.fiber_count() * m);
    Output theta;
    theta.kind = OutputKind::kRecord;
    for (std::size_t x = 0; x < threat_.aux.fiber_count(); ++x) {
      for (RecordId r = 0; r < m; ++r) {
        theta.record = r;
        compute_candidates(theta, static_cast<int>(x),
                           record_memo_[x * m + r]);
      }
    }
  }
}

void OptimalAttack::scores(const Output& theta, int aux_value,
                           std::vector<double>& out) const {
  std::size_t m = universe_.size();
  if (aux_value < 0 ||
      static_cast<std::size_t>(aux_value) >= threat_.aux.fiber_count()) {
    throw ConfigError("aux value is not realizable");
  }
  WeightTable table;
  compute_weight_table(mech_, prior_, theta, table);
  const auto& fiber = fiber_sorted_[aux_value];
  out.assign(m, 0.0);

  const ErrorModel& err = threat_.error;
  if (err.kind() == ErrorKind::kExactMatch && err.eta() < 1.0) {
    // Success sets are singletons: W(z') = w(theta, z') pi_{z'} inside the
    // fiber, 0 elsewhere.
    for (RecordId z : fiber) {
      out[z] = table.weights[z] * prior_.weight(z);
    }
    return;
  }
  if (err.kind() == ErrorKind::kExactMatch) {
    // eta >= 1 makes every guess succeed; W is the whole-fiber mass.
    double total = 0.0;
    for (RecordId z : fiber) total += table.weights[z] * prior_.weight(z);
    out.assign(m, total);
    return;
  }
  // Absolute difference: W(z') sums fiber members within eta of z'. A
  // two-pointer sweep in embedding order locates the window bounds; the sum
  // is recomputed fresh per candidate so that algebraic ties stay bitwise
  // equal (a sliding add/subtract would drift).
  double eta = err.eta();
  std::size_t lo = 0, hi = 0;  // window [lo, hi) into the sorted fiber
  for (RecordId zp : by_embedding_) {
    double e = universe_.embedding(zp);
    while (hi < fiber.size() && universe_.embedding(fiber[hi]) - e <= eta) {
      ++hi;
    }
    while (lo < hi && e - universe_.embedding(fiber[lo]) > eta) {
      ++lo;
    }
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      s += table.weights[fiber[i]] * prior_.weight(fiber[i]);
    }
    out[zp] = s;
  }
}

void OptimalAttack::compute_candidates(const Output& theta, int aux_value,
                                       std::vector<RecordId>& out) const {
  std::vector<double> w;
  scores(theta, aux_value, w);
  double best = w[0];
  for (double v : w) best = std::max(best, v);
  out.clear();
  for (RecordId z = 0; z < w.size(); ++z) {
    if (w[z] == best) out.push_back(z);
  }
}

std::vector<RecordId> OptimalAttack::candidate_set(const Output& theta,
                                                   int aux_value) const {
  std::vector<RecordId> out;
  if (!record_memo_.empty() && theta.kind == OutputKind::kRecord) {
    return record_memo_[static_cast<std::size_t>(aux_value) *
                            universe_.size() +
                        theta.record];
  }
  compute_candidates(theta, aux_value, out);
  return out;
}

RecordId OptimalAttack::respond(const Output& theta, int aux_value,
                                Pcg32& rng) const {
  if (!record_memo_.empty() && theta.kind == OutputKind::kRecord) {
    return pick_uniform(record_memo_[static_cast<std::size_t>(aux_value) *
                                         universe_.size() +
                                     theta.record],
                        rng);
  }
  std::vector<RecordId> set;
  compute_candidates(theta, aux_value, set);
  return pick_uniform(set, rng);
}

void OptimalAttack::response_distribution(
    const Output& theta, int aux_value,
    std::vector<std::pair<RecordId, double>>& out) const {
  uniform_distribution(candidate_set(theta, aux_value), out);
}

//===----------------------------------------------------------------------===//
// ObliviousPriorAttack
//===----------------------------------------------------------------------===//

ObliviousPriorAttack::ObliviousPriorAttack(const Universe& universe,
                                           const DiscretePrior& prior,
                                           const ThreatModel& threat) {
  threat.error.check_compatible(universe);
  std::size_t m = universe.size();
  per_fiber_argmax_.resize(threat.aux.fiber_count());
  for (std::size_t x = 0; x < threat.aux.fiber_count(); ++x) {
    const auto& fiber = threat.aux.fiber(static_cast<int>(x));
    std::vector<double> mass(m, 0.0);
    for (RecordId zp = 0; zp < m; ++zp) {
      double s = 0.0;
      for (RecordId z : fiber) {
        if (threat.error.success(universe, z, zp)) s += prior.weight(z);
      }
      mass[zp] = s;
    }
    double best = *std::max_element(mass.begin(), mass.end());
    for (RecordId zp = 0; zp < m; ++zp) {
      if (mass[zp] == best) per_fiber_argmax_[x].push_back(zp);
    }
  }
}

RecordId ObliviousPriorAttack::respond(const Output&, int aux_value,
                                       Pcg32& rng) const {
  if (aux_value < 0 ||
      static_cast<std::size_t>(aux_value) >= per_fiber_argmax_.size()) {
    throw ConfigError("aux value is not realizable");
  }
  return pick_uniform(per_fiber_argmax_[aux_value], rng);
}

void ObliviousPriorAttack::response_distribution(
    const Output&, int aux_value,
    std::vector<std::pair<RecordId, double>>& out) const {
  uniform_distribution(per_fiber_argmax_[aux_value], out);
}

//===----------------------------------------------------------------------===//
// Fast responders for uniform / no-aux / perfect reconstruction
//===----------------------------------------------------------------------===//

namespace {

// eps = 0 leaves no signal in the output: every record ties.
class UniformGuessAttack final : public Attack {
 public:
  explicit UniformGuessAttack(std::size_t m)
      : m_(static_cast<std::uint32_t>(m)) {}
  RecordId respond(const Output&, int, Pcg32& rng) const override {
    return rng.bounded(m_);
  }
  void response_distribution(
      const Output&, int,
      std::vector<std::pair<RecordId, double>>& out) const override {
    out.clear();
    double p = 1.0 / m_;
    for (RecordId z = 0; z < m_; ++z) out.emplace_back(z, p);
  }

 private:
  std::uint32_t m_;
};

// GRR with uniform prior: the reported record is the unique argmax.
class GrrMapAttack final : public Attack {
 public:
  RecordId respond(const Output& theta, int, Pcg32&) const override {
    return theta.record;
  }
  void response_distribution(
      const Output& theta, int,
      std::vector<std::pair<RecordId, double>>& out) const override {
    out.assign(1, {theta.record, 1.0});
  }
};

// OUE with uniform prior: the set bits tie for the argmax; an all-zero
// report carries no evidence and ties the whole universe.
class OueOnesAttack final : public Attack {
 public:
  explicit OueOnesAttack(std::size_t m)
      : m_(static_cast<std::uint32_t>(m)) {}
  RecordId respond(const Output& theta, int, Pcg32& rng) const override {
    if (theta.items.empty()) return rng.bounded(m_);
    return theta.items[rng.bounded(
        static_cast<std::uint32_t>(theta.items.size()))];
  }
  void response_distribution(
      const Output& theta, int,
      std::vector<std::pair<RecordId, double>>& out) const override {
    out.clear();
    if (theta.items.empty()) {
      double p = 1.0 / m_;
      for (RecordId z = 0; z < m_; ++z) out.emplace_back(z, p);
      return;
    }
    double p = 1.0 / static_cast<double>(theta.items.size());
    for (RecordId z : theta.items) out.emplace_back(z, p);
  }

 private:
  std::uint32_t m_;
};

// SS with uniform prior: subset members tie for the argmax.
class SsSubsetAttack final : public Attack {
 public:
  RecordId respond(const Output& theta, int, Pcg32& rng) const override {
    return theta.items[rng.bounded(
        static_cast<std::uint32_t>(theta.items.size()))];
  }
  void response_distribution(
      const Output& theta, int,
      std::vector<std::pair<RecordId, double>>& out) const override {
    out.clear();
    double p = 1.0 / static_cast<double>(theta.items.size());
    for (RecordId z : theta.items) out.emplace_back(z, p);
  }
};

bool perfect_reconstruction(const ThreatModel& threat) {
  if (threat.error.kind() == ErrorKind::kExactMatch) {
    return threat.error.eta() < 1.0;
  }
  return threat.error.eta() == 0.0;
}

}  // namespace

std::unique_ptr<Attack> make_optimal_attack(const Mechanism& mech,
                                            const Universe& universe,
                                            const DiscretePrior& prior,
                                            const ThreatModel& threat) {
  bool fast_eligible = prior.is_uniform() &&
                       threat.aux.mode() == AuxMode::kNone &&
                       perfect_reconstruction(threat);
  if (fast_eligible) {
    if (mech.epsilon() == 0.0) {
      return std::make_unique<UniformGuessAttack>(universe.size());
    }
    switch (mech.kind()) {
      case MechanismKind::kGrr:
        return std::make_unique<GrrMapAttack>();
      case MechanismKind::kOue:
        return std::make_unique<OueOnesAttack>(universe.size());
      case MechanismKind::kSs:
        return std::make_unique<SsSubsetAttack>();
      default:
        break;
    }
  }
  return std::make_unique<OptimalAttack>(mech, universe, prior, threat);
}

}  // namespace radkit
