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
#include <string>
#include <vector>

#include "radkit/estimator.hpp"
#include "radkit/mechanisms.hpp"

namespace radkit {

// Empirical privacy budget obtained by inverting a bound at a measured
// advantage. Nonpositive or saturating advantages do not carry a budget, so
// the estimate can be undefined; estimates implying eps beyond the search
// cap are reported as saturated (> cap) rather than as a number.
struct EpsEstimate {
  enum class Status { kDefined, kUndefined, kSaturated };
  Status status = Status::kUndefined;
  double value = 0.0;

  bool defined() const { return status == Status::kDefined; }
};

inline constexpr double kAuditEpsLo = 1e-4;
inline constexpr double kAuditEpsHi = 50.0;

// Mechanism-agnostic inversion of the uniform black-box bound at delta = 0:
// eps = ln((gamma m + 1) / (1 - gamma m / (m - 1))), defined for
// gamma in (0, (m-1)/m).
EpsEstimate invert_blackbox(double gamma_hat, std::size_t m);

// Mechanism-aware inversion of the attack-optimal bound under a uniform
// prior, perfect reconstruction and no auxiliary knowledge. GRR has a closed
// inverse; OUE and SS are inverted by bisection to 1e-6.
EpsEstimate invert_mechanism_bound(MechanismKind kind, double gamma_hat,
                                   std::size_t m);

struct AuditRow {
  int repetition = 0;
  double gamma_hat = 0.0;
  EpsEstimate eps;
};

struct AuditReport {
  MechanismKind kind = MechanismKind::kGrr;
  double claimed_eps = 0.0;
  std::size_t m = 0;
  int repetitions = 0;
  std::uint64_t budget = 0;
  std::uint64_t trials_per_target = 0;
  std::uint64_t master_seed = 0;
  std::vector<AuditRow> rows;
  // Statistics over the defined estimates only.
  double mean_eps = 0.0;
  double std_eps = 0.0;
  int defined_count = 0;
  int undefined_count = 0;
  int saturated_count = 0;
};

// Runs R independent advantage estimations of the optimal attack against
// the claimed mechanism (uniform prior, perfect reconstruction, no aux,
// J = budget / m trials per target) and inverts each into an empirical
// privacy budget.
AuditReport audit(const MechanismSpec& spec, double claimed_eps,
                  std::size_t m, int repetitions, std::uint64_t budget,
                  std::uint64_t master_seed, int parallelism = 0);

std::string audit_to_csv(const AuditReport& report);
std::string audit_to_json(const AuditReport& report);

}  // namespace radkit
