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

#include "radkit/domain.hpp"
#include "radkit/mechanisms.hpp"

namespace radkit {

// Sample sizes for the three nested Monte Carlo levels: outer outputs
// (n_theta), the success-set integral (n_z) and the output marginal (n_p).
struct NestedMcPlan {
  int n_theta = 500;
  int n_z = 500;
  int n_p = 500;
  int repetitions = 500;
  std::uint64_t master_seed = 0;
  double eta = 0.1;
  int parallelism = 1;
};

struct McEstimate {
  double estimate = 0.0;  // mean over repetitions
  double ci_low = 0.0;    // empirical 95% interval over repetitions
  double ci_high = 0.0;
  double density_cap = 0.0;   // M
  double kappa_plus = 0.0;    // sup_x P[|Z - x| <= eta]
  int candidate_count = 0;    // largest candidate set seen (k)
  std::vector<double> repetition_estimates;
};

// Candidate maximizers of g_theta(x) = integral over S_eta(x) of
// (p(theta | z) - y_hat) pi(z) dz: the piecewise-region endpoints that can
// host a maximum plus the descending sign-change roots of g'_theta, located
// on a 256-point grid per region and refined by bisection.
std::vector<double> candidate_maximizers(const ExponentialMechanism1D& mech,
                                         const ContinuousPrior& prior,
                                         double theta, double eta,
                                         double y_hat);

// Nested Monte Carlo estimate of the attack-optimal advantage bound for a
// continuous mechanism. Each repetition samples n_theta outputs; for each
// output the marginal is estimated from n_p prior draws and the success-set
// integral from one shared batch of n_z prior draws across all candidates.
McEstimate nested_mc_bound(const NestedMcPlan& plan,
                           const ExponentialMechanism1D& mech,
                           const ContinuousPrior& prior);

// Analytic failure-probability bound: P(|estimate - truth| >= t) for the
// nested estimator with density cap M and k candidate maximizers. Vacuous
// regimes are clamped to 1.
double mc_failure_bound(double t, int n_theta, int n_z, int n_p,
                        double density_cap, double kappa_plus, int k);

}  // namespace radkit
