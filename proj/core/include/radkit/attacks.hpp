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

#include <memory>
#include <utility>
#include <vector>

#include "radkit/domain.hpp"
#include "radkit/mechanisms.hpp"

namespace radkit {

// Posterior-evidence weights for one observed output:
// w(theta, z) = p_M(theta | z) - p_M(theta), with the marginal taken under
// the informed adversary's prior. Satisfies sum_z w(theta, z) pi_z = 0.
struct WeightTable {
  std::vector<double> weights;
  double marginal = 0.0;
};

void compute_weight_table(const Mechanism& mech, const DiscretePrior& prior,
                          const Output& theta, WeightTable& table);

// A reconstruction adversary A(theta, a(z)) -> candidate record. respond()
// must be pure given (theta, aux value, stream); implementations may
// precompute lookup structures at construction but hold no mutable state.
class Attack {
 public:
  virtual ~Attack() = default;

  virtual RecordId respond(const Output& theta, int aux_value,
                           Pcg32& rng) const = 0;

  // Exact output distribution of respond() as (record, probability) pairs;
  // consumed by the exact-risk oracle.
  virtual void response_distribution(
      const Output& theta, int aux_value,
      std::vector<std::pair<RecordId, double>>& out) const = 0;
};

// The provably optimal reconstruction attack: given theta and aux value x,
// scores every candidate z' by the success-set evidence mass
//   W(z') = sum over {z in fiber(x) : ell(z, z') <= eta} of w(theta, z) pi_z
// and returns a uniformly random element of the argmax set.
class OptimalAttack : public Attack {
 public:
  OptimalAttack(const Mechanism& mech, const Universe& universe,
                const DiscretePrior& prior, const ThreatModel& threat);

  RecordId respond(const Output& theta, int aux_value,
                   Pcg32& rng) const override;
  void response_distribution(
      const Output& theta, int aux_value,
      std::vector<std::pair<RecordId, double>>& out) const override;

  // Candidate argmax set for one (theta, aux) pair; exposed for tests.
  std::vector<RecordId> candidate_set(const Output& theta,
                                      int aux_value) const;

  // Scores W(z') for all z'; scaled variants must preserve the argmax.
  void scores(const Output& theta, int aux_value,
              std::vector<double>& out) const;

 private:
  void compute_candidates(const Output& theta, int aux_value,
                          std::vector<RecordId>& out) const;

  const Mechanism& mech_;
  const Universe& universe_;
  const DiscretePrior& prior_;
  ThreatModel threat_;
  // Records ordered by embedding for windowed success sets.
  std::vector<RecordId> by_embedding_;
  // Fiber members ordered by embedding, per aux value.
  std::vector<std::vector<RecordId>> fiber_sorted_;
  // Memoized argmax sets for record-valued outputs, indexed
  // [aux_value * m + record].
  std::vector<std::vector<RecordId>> record_memo_;
};

// Mechanism-oblivious baseline: ignores theta entirely and returns a record
// maximizing the prior mass of its success set inside the fiber. Its exact
// reconstruction advantage is zero by construction.
class ObliviousPriorAttack : public Attack {
 public:
  ObliviousPriorAttack(const Universe& universe, const DiscretePrior& prior,
                       const ThreatModel& threat);

  RecordId respond(const Output& theta, int aux_value,
                   Pcg32& rng) const override;
  void response_distribution(
      const Output& theta, int aux_value,
      std::vector<std::pair<RecordId, double>>& out) const override;

  const std::vector<RecordId>& argmax_set(int aux_value) const {
    return per_fiber_argmax_[aux_value];
  }

 private:
  std::vector<std::vector<RecordId>> per_fiber_argmax_;
};

// Picks the fastest correct implementation of the optimal attack for the
// given configuration. Uniform prior, no auxiliary knowledge and
// perfect-reconstruction error admit O(1) responders for GRR / OUE / SS;
// anything else falls back to the generic scorer above.
std::unique_ptr<Attack> make_optimal_attack(const Mechanism& mech,
                                            const Universe& universe,
                                            const DiscretePrior& prior,
                                            const ThreatModel& threat);

}  // namespace radkit
