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

#include "benchmark/benchmark.h"
#include "radkit/estimator.hpp"

namespace {

using namespace radkit;

// Throughput of the whole trial loop (sample + attack + scoring), the cost
// that dominates tightness and audit runs.
void BM_EstimateTrials(benchmark::State& state) {
  std::size_t m = static_cast<std::size_t>(state.range(0));
  Universe u = Universe::indexed(m);
  DiscretePrior prior = DiscretePrior::uniform(m);
  ThreatModel threat{ErrorModel(ErrorKind::kExactMatch, 0.0),
                     AuxMap::none(u)};
  MechanismSpec spec;
  spec.kind = static_cast<MechanismKind>(state.range(1));
  spec.eps = 1.0;
  auto mech = make_mechanism(spec, u);
  auto attack = make_optimal_attack(*mech, u, prior, threat);
  EstimationPlan plan;
  plan.trials_per_target = 200;
  plan.parallelism = 1;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    plan.master_seed = ++seed;
    EstimateResult r = estimate(plan, *mech, u, prior, threat, *attack);
    benchmark::DoNotOptimize(r.gamma_hat);
  }
  state.SetItemsProcessed(state.iterations() * plan.trials_per_target *
                          (m + m * m));
}
BENCHMARK(BM_EstimateTrials)
    ->Args({64, static_cast<int>(MechanismKind::kGrr)})
    ->Args({64, static_cast<int>(MechanismKind::kOue)})
    ->Args({64, static_cast<int>(MechanismKind::kSs)});

void BM_TrialStreamDerivation(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state) {
    Pcg32 rng = trial_stream(42, 1, 7, 9, ++i);
    benchmark::DoNotOptimize(rng.next_u32());
  }
}
BENCHMARK(BM_TrialStreamDerivation);

}  // namespace
