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
#include <set>

#include "gtest/gtest.h"
#include "radkit/bounds.hpp"
#include "radkit/estimator.hpp"

namespace radkit {
namespace {

Output record_output(RecordId r) {
  Output out;
  out.kind = OutputKind::kRecord;
  out.record = r;
  return out;
}

ThreatModel no_aux(const Universe& u, double eta = 0.0,
                   ErrorKind kind = ErrorKind::kExactMatch) {
  return {ErrorModel(kind, eta), AuxMap::none(u)};
}

TEST(WeightTable, SumsToZeroUnderThePrior) {
  Pcg32 rng(1);
  Output theta;
  WeightTable table;
  for (std::size_t m : {3, 6, 10}) {
    std::vector<double> w(m);
    for (auto& x : w) x = rng.u01() + 0.05;
    DiscretePrior prior = DiscretePrior::from_weights(w);
    GrrMechanism grr(m, 1.2);
    OueMechanism oue(m, 0.7);
    SsMechanism ss(m, 1.0);
    for (const Mechanism* mech :
         std::vector<const Mechanism*>{&grr, &oue, &ss}) {
      for (int i = 0; i < 5; ++i) {
        mech->sample(rng.bounded(static_cast<std::uint32_t>(m)), rng, theta);
        compute_weight_table(*mech, prior, theta, table);
        double acc = 0.0;
        for (RecordId z = 0; z < m; ++z) {
          acc += table.weights[z] * prior.weight(z);
        }
        EXPECT_NEAR(acc, 0.0, 1e-10);
      }
    }
  }
}

TEST(OptimalAttack, GrrScoresExample) {
  // m = 3, eps = ln 2, uniform: W(theta) = 1/18, others -1/36.
  Universe u = Universe::indexed(3);
  DiscretePrior prior = DiscretePrior::uniform(3);
  GrrMechanism grr(3, std::log(2.0));
  OptimalAttack attack(grr, u, prior, no_aux(u));
  std::vector<double> scores;
  attack.scores(record_output(1), 0, scores);
  EXPECT_NEAR(scores[1], 1.0 / 18.0, 1e-12);
  EXPECT_NEAR(scores[0], -1.0 / 36.0, 1e-12);
  EXPECT_NEAR(scores[2], -1.0 / 36.0, 1e-12);
  auto set = attack.candidate_set(record_output(1), 0);
  ASSERT_EQ(set.size(), 1u);
  EXPECT_EQ(set[0], 1u);
}

TEST(OptimalAttack, ZeroBudgetTiesWholeUniverse) {
  Universe u = Universe::indexed(4);
  DiscretePrior prior = DiscretePrior::uniform(4);
  GrrMechanism grr(4, 0.0);
  OptimalAttack attack(grr, u, prior, no_aux(u));
  auto set = attack.candidate_set(record_output(2), 0);
  EXPECT_EQ(set.size(), 4u);
  // Tie-break draws roughly uniformly from the supplied stream.
  Pcg32 rng(5);
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 40000; ++i) {
    ++counts[attack.respond(record_output(2), 0, rng)];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

// Full auxiliary knowledge: membership is asserted exactly on positive
// evidence, otherwise a record outside the fiber is returned.
TEST(OptimalAttack, MembershipModeFollowsEvidenceSign) {
  Universe u = Universe::indexed(4);
  DiscretePrior prior = DiscretePrior::uniform(4);
  GrrMechanism grr(4, 1.0);
  ThreatModel t{ErrorModel(ErrorKind::kExactMatch, 0.0), AuxMap::full(u)};
  OptimalAttack attack(grr, u, prior, t);
  WeightTable table;
  Pcg32 rng(6);
  for (RecordId target = 0; target < 4; ++target) {
    int aux = t.aux.value_of(target);
    for (RecordId theta = 0; theta < 4; ++theta) {
      compute_weight_table(grr, prior, record_output(theta), table);
      double w = table.weights[target];
      for (int i = 0; i < 50; ++i) {
        RecordId guess = attack.respond(record_output(theta), aux, rng);
        if (w > 0) {
          ASSERT_EQ(guess, target);
        } else if (w < 0) {
          ASSERT_NE(guess, target);
        }
      }
    }
  }
}

TEST(OptimalAttack, ScaledScoresPreserveTheArgmaxSet) {
  Universe u = Universe::integer_range(0, 9);
  std::vector<double> w(10);
  for (std::size_t i = 0; i < 10; ++i) w[i] = 1.0 + (i % 4);
  DiscretePrior prior = DiscretePrior::from_weights(w);
  GrrMechanism grr(10, 1.0);
  ThreatModel t = no_aux(u, 2.0, ErrorKind::kAbsoluteDifference);
  OptimalAttack attack(grr, u, prior, t);
  std::vector<double> scores;
  for (RecordId theta = 0; theta < 10; ++theta) {
    attack.scores(record_output(theta), 0, scores);
    auto argmax_of = [](const std::vector<double>& v) {
      double best = *std::max_element(v.begin(), v.end());
      std::set<std::size_t> set;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == best) set.insert(i);
      }
      return set;
    };
    auto base = argmax_of(scores);
    for (double c : {2.0, 4.0, 0.5, 3.0}) {
      std::vector<double> scaled = scores;
      for (double& v : scaled) v *= c;
      EXPECT_EQ(argmax_of(scaled), base) << "c=" << c;
    }
  }
}

TEST(ObliviousAttack, UniformPriorGuessesUniformly) {
  Universe u = Universe::indexed(5);
  DiscretePrior prior = DiscretePrior::uniform(5);
  ObliviousPriorAttack attack(u, prior, no_aux(u));
  EXPECT_EQ(attack.argmax_set(0).size(), 5u);
}

TEST(ObliviousAttack, ModeOfSkewedPrior) {
  Universe u = Universe::indexed(3);
  DiscretePrior prior = DiscretePrior::from_weights({0.7, 0.2, 0.1});
  ObliviousPriorAttack attack(u, prior, no_aux(u));
  Pcg32 rng(7);
  Output unused = record_output(2);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(attack.respond(unused, 0, rng), 0u);
  }
}

TEST(ObliviousAttack, FiberRestrictedMode) {
  Universe u = Universe::with_fields(
      {"g", "v"}, {{"a", "1"}, {"b", "1"}, {"b", "2"}});
  DiscretePrior prior = DiscretePrior::from_weights({0.5, 0.3, 0.2});
  ThreatModel t{ErrorModel(ErrorKind::kExactMatch, 0.0),
                AuxMap::attribute(u, {"g"})};
  ObliviousPriorAttack attack(u, prior, t);
  int fiber_b = t.aux.value_of(1);
  ASSERT_EQ(t.aux.fiber(fiber_b).size(), 2u);
  Pcg32 rng(8);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(attack.respond(record_output(0), fiber_b, rng), 1u);
  }
}

TEST(ObliviousAttack, ExactAdvantageIsZero) {
  Pcg32 rng(9);
  for (std::size_t m : {3, 5}) {
    std::vector<double> w(m);
    for (auto& x : w) x = rng.u01() + 0.1;
    DiscretePrior prior = DiscretePrior::from_weights(w);
    Universe u = Universe::indexed(m);
    GrrMechanism grr(m, 1.0);
    ThreatModel t = no_aux(u);
    ObliviousPriorAttack attack(u, prior, t);
    EXPECT_NEAR(exact_rad(grr, u, prior, t, attack), 0.0, 1e-14);
    // Its raw success equals the prior's top mass.
    double top = *std::max_element(prior.weights().begin(),
                                   prior.weights().end());
    EXPECT_NEAR(exact_rero(grr, u, prior, t, attack), top, 1e-12);
  }
}

// The optimal attack attains the enumerated bound exactly (tightness), for
// uniform and skewed priors and across mechanisms.
TEST(OptimalAttack, ExactAdvantageEqualsEnumeratedBound) {
  for (std::size_t m : {3, 4, 6}) {
    Universe u = Universe::indexed(m);
    DiscretePrior uniform = DiscretePrior::uniform(m);
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = 1.0 + static_cast<double>(i);
    DiscretePrior skew = DiscretePrior::from_weights(w);
    for (double eps : {0.5, 1.0, 2.0}) {
      GrrMechanism grr(m, eps);
      OueMechanism oue(m, eps);
      SsMechanism ss(m, eps);
      for (const Mechanism* mech :
           std::vector<const Mechanism*>{&grr, &oue, &ss}) {
        for (const DiscretePrior* prior : {&uniform, &skew}) {
          for (AuxMode mode : {AuxMode::kNone, AuxMode::kFull}) {
            ThreatModel t{ErrorModel(ErrorKind::kExactMatch, 0.0),
                          mode == AuxMode::kNone ? AuxMap::none(u)
                                                 : AuxMap::full(u)};
            OptimalAttack attack(*mech, u, *prior, t);
            double bound = bound_optimal_enumerated(*mech, u, *prior, t).value;
            EXPECT_NEAR(exact_rad(*mech, u, *prior, t, attack), bound, 1e-12)
                << to_string(mech->kind()) << " m=" << m << " eps=" << eps;
          }
        }
      }
    }
  }
}

TEST(OptimalAttack, WindowedErrorAttainsBound) {
  Universe u = Universe::indexed(7);
  std::vector<double> w = {3, 1, 2, 1, 4, 1, 2};
  DiscretePrior prior = DiscretePrior::from_weights(w);
  GrrMechanism grr(7, 1.0);
  ThreatModel t = no_aux(u, 1.0, ErrorKind::kAbsoluteDifference);
  OptimalAttack attack(grr, u, prior, t);
  EXPECT_NEAR(exact_rad(grr, u, prior, t, attack),
              bound_optimal_enumerated(grr, u, prior, t).value, 1e-12);
}

// The fast responders are behaviorally identical to the generic scorer.
TEST(OptimalAttack, FastPathMatchesGenericExactly) {
  for (std::size_t m : {3, 5, 6}) {
    Universe u = Universe::indexed(m);
    DiscretePrior prior = DiscretePrior::uniform(m);
    ThreatModel t = no_aux(u);
    for (double eps : {0.0, 0.8, 2.0}) {
      GrrMechanism grr(m, eps);
      OueMechanism oue(m, eps);
      SsMechanism ss(m, eps);
      for (const Mechanism* mech :
           std::vector<const Mechanism*>{&grr, &oue, &ss}) {
        auto fast = make_optimal_attack(*mech, u, prior, t);
        OptimalAttack generic(*mech, u, prior, t);
        EXPECT_NEAR(exact_rad(*mech, u, prior, t, *fast),
                    exact_rad(*mech, u, prior, t, generic), 1e-13)
            << to_string(mech->kind()) << " m=" << m << " eps=" << eps;
      }
    }
  }
}

// Empirical advantage of the optimal attack lands on the enumerated bound
// within Monte Carlo error across mechanisms and budgets.
TEST(OptimalAttack, EmpiricalAdvantageTracksBoundAtMediumScale) {
  constexpr std::size_t m = 12;
  Universe u = Universe::indexed(m);
  DiscretePrior prior = DiscretePrior::uniform(m);
  ThreatModel t = no_aux(u);
  for (double eps : {0.5, 1.0, 2.0, 4.0}) {
    GrrMechanism grr(m, eps);
    OueMechanism oue(m, eps);
    SsMechanism ss(m, eps);
    for (const Mechanism* mech :
         std::vector<const Mechanism*>{&grr, &oue, &ss}) {
      auto attack = make_optimal_attack(*mech, u, prior, t);
      double bound = bound_optimal_enumerated(*mech, u, prior, t).value;
      EstimationPlan plan;
      plan.trials_per_target = 2000;
      plan.master_seed = mix64(77, static_cast<std::uint64_t>(eps * 16) +
                                       static_cast<int>(mech->kind()));
      plan.parallelism = 2;
      EstimateResult est = estimate(plan, *mech, u, prior, t, *attack);
      EXPECT_NEAR(est.gamma_hat, bound, 3.0 * est.std_error + 1e-12)
          << to_string(mech->kind()) << " eps=" << eps;
    }
  }
}

// No deterministic attack beats the optimal one (exhaustive check).
TEST(OptimalAttack, BeatsEveryDeterministicTable) {
  for (std::size_t m : {2, 3}) {
    Universe u = Universe::indexed(m);
    DiscretePrior prior = DiscretePrior::uniform(m);
    ThreatModel t = no_aux(u);
    GrrMechanism grr(m, std::log(2.0));
    OptimalAttack attack(grr, u, prior, t);
    double best = exact_rad(grr, u, prior, t, attack);
    std::uint64_t tables = 1;
    for (std::size_t i = 0; i < m; ++i) tables *= m;
    for (std::uint64_t code = 0; code < tables; ++code) {
      std::vector<RecordId> responses;
      std::uint64_t c = code;
      for (std::size_t i = 0; i < m; ++i) {
        responses.push_back(static_cast<RecordId>(c % m));
        c /= m;
      }
      EXPECT_LE(exact_rad_for_table(grr, u, prior, t, responses),
                best + 1e-12);
    }
  }
}

}  // namespace
}  // namespace radkit
