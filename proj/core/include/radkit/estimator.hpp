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
#include <vector>

#include "radkit/attacks.hpp"
#include "radkit/domain.hpp"
#include "radkit/mechanisms.hpp"

namespace radkit {

enum class Estimand { kRad, kRero };

struct EstimationPlan {
  std::uint64_t trials_per_target = 1000;  // J
  std::uint64_t master_seed = 0;
  // Worker threads; 0 picks the hardware concurrency. Results are
  // bit-identical for any value.
  int parallelism = 1;
  Estimand estimand = Estimand::kRad;
  // Reuses challenger draws across same-fiber targets in the correction
  // term, cutting its cost from O(m^2 J) to O(m J) at the price of
  // correlated cells. Off by default.
  bool correction_shortcut = false;
};

// Point estimate with exact per-cell success counts. The estimate is
// gamma_hat = term1 - term2 where term1 averages attack success with the
// target in the data and term2 is the prior-resampled correction; for the
// plain success-probability estimand term2 is identically zero.
struct EstimateResult {
  double gamma_hat = 0.0;
  double term1 = 0.0;
  double term2 = 0.0;
  double std_error = 0.0;
  std::uint64_t trials_per_target = 0;
  std::uint64_t total_trials = 0;
  // Success counts per target z (term 1) and per flattened pair
  // z0 * m + z1 (term 2). Counts stay integers until the weights are
  // applied once at the end, so reductions are order-independent.
  std::vector<std::uint64_t> term1_counts;
  std::vector<std::uint64_t> term2_counts;
};

EstimateResult estimate(const EstimationPlan& plan, const Mechanism& mech,
                        const Universe& universe, const DiscretePrior& prior,
                        const ThreatModel& threat, const Attack& attack);

// Exact reconstruction advantage of an attack by full enumeration of the
// output space, using the attack's exact response distribution. Only valid
// for mechanisms with enumerable outputs.
double exact_rad(const Mechanism& mech, const Universe& universe,
                 const DiscretePrior& prior, const ThreatModel& threat,
                 const Attack& attack);

// Exact raw success probability (the quantity the advantage corrects).
double exact_rero(const Mechanism& mech, const Universe& universe,
                  const DiscretePrior& prior, const ThreatModel& threat,
                  const Attack& attack);

// Exact advantage of a deterministic attack table; responses[i] is the
// record returned for the i-th output in enumeration order. Auxiliary
// knowledge is ignored (table attacks model the no-aux setting).
double exact_rad_for_table(const Mechanism& mech, const Universe& universe,
                           const DiscretePrior& prior,
                           const ThreatModel& threat,
                           const std::vector<RecordId>& responses);

}  // namespace radkit
