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

#include <string>

#include "radkit/accounting.hpp"
#include "radkit/attacks.hpp"
#include "radkit/domain.hpp"
#include "radkit/mechanisms.hpp"

namespace radkit {

// Provenance of a risk value: which bound produced it.
enum class BoundSource {
  kWorstCaseTv,         // total-variation worst case, any aux
  kOptimalEnumerated,   // exact attack-optimal value by enumeration
  kOptimalClosedForm,   // exact attack-optimal value in closed form
  kFdpNoAux,            // trade-off-function bound, no aux
  kEpsDeltaNoAux,       // (eps, delta) bound, no aux
  kPerfectRecoBlackbox, // perfect-reconstruction black-box bound
  kUniformBlackbox,     // black-box bound specialized to uniform priors
  kGdpComposed,         // Gaussian-DP composition bound
  kReroEpsilon,         // prior success-probability bound under pure DP
  kReroFdp,             // prior success-probability bound under f-DP
};

std::string to_string(BoundSource source);

// A reconstruction-advantage (or success-probability) bound together with
// the assumptions under which it is valid.
struct RadBound {
  double value = 0.0;
  BoundSource source = BoundSource::kWorstCaseTv;
  AuxMode aux = AuxMode::kNone;
  double eta = 0.0;
};

// Prior statistics consumed by the no-aux bounds.
struct PriorStats {
  double kappa_pi = 0.0;
  double kappa_plus = 0.0;
  double kappa_minus = 0.0;
};

PriorStats prior_stats(const Universe& u, const DiscretePrior& prior,
                       const ErrorModel& error);

//===----------------------------------------------------------------------===//
// Advantage bounds
//===----------------------------------------------------------------------===//

// Worst case over every attack and auxiliary model:
// TV(M) (1 - kappa_pi). Continuous priors use kappa_pi = 0.
RadBound bound_worst_case(const Mechanism& mech, const DiscretePrior& prior);
RadBound bound_worst_case_eps_delta(double eps, double delta,
                                    double kappa_pi);

// Exact attack-optimal advantage by full triple enumeration over outputs,
// aux values and candidates. Throws CapacityError when the output space is
// too large.
RadBound bound_optimal_enumerated(const Mechanism& mech,
                                  const Universe& universe,
                                  const DiscretePrior& prior,
                                  const ThreatModel& threat);

// Closed forms of the attack-optimal advantage for the combinations that
// admit one. Throws ConfigError("no closed form ...") otherwise.
RadBound bound_closed_form(const Mechanism& mech, const Universe& universe,
                           const DiscretePrior& prior,
                           const ThreatModel& threat);

// f-DP bound, valid only without auxiliary knowledge: the smaller of
//   max over alpha in [kappa-, kappa+] of (1 - f(alpha) - alpha)
// and, for discrete priors,
//   (1 - kappa_pi) max over alpha in [0, kappa+ / (1 - kappa_pi)].
RadBound bound_fdp(const Tradeoff& tf, const PriorStats& stats,
                   bool discrete, double eta);
RadBound bound_fdp(const Tradeoff& tf, const Universe& u,
                   const DiscretePrior& prior, const ThreatModel& threat);

// (eps, delta) bound without auxiliary knowledge: minimum of three branches.
RadBound bound_epsdelta(double eps, double delta, const PriorStats& stats,
                        double eta);
RadBound bound_epsdelta(double eps, double delta, const Universe& u,
                        const DiscretePrior& prior, const ThreatModel& threat);

// Perfect-reconstruction black-box bound for categorical data; the prior is
// processed in decreasing pi (1 - pi) order.
RadBound bound_perfect_reco_bb(double eps, double delta,
                               const DiscretePrior& prior);

// Uniform-prior specialization: (e^eps - 1 + delta m) / (e^eps + m - 1)
// * (m - 1) / m.
RadBound bound_uniform_bb(double eps, double delta, std::size_t m);

// Largest possible sum of per-record advantages under (eps, delta)-DP;
// m * bound_uniform_bb(eps, delta, m).value equals this cap.
double per_record_advantage_cap(double eps, double delta, std::size_t m);

//===----------------------------------------------------------------------===//
// Prior success-probability (ReRo) bounds, for comparison
//===----------------------------------------------------------------------===//

// kappa+ e^eps under pure DP, capped at 1.
double bound_rero_pure_dp(double eps, double kappa_plus);

// 1 - f(kappa+) under f-DP.
double bound_rero_fdp(const Tradeoff& tf, double kappa_plus);

// Inverse of bound_rero_fdp in eps at delta = 0 (used to compare
// calibration strategies).
double calibrate_rero_fdp_epsilon(double gamma, double kappa_plus);

//===----------------------------------------------------------------------===//
// Calibration: smallest noise meeting a target risk
//===----------------------------------------------------------------------===//

inline constexpr double kCalibrationTolerance = 1e-6;
inline constexpr double kEpsSearchLo = 1e-6;
inline constexpr double kEpsSearchHi = 50.0;
inline constexpr double kSigmaSearchLo = 1e-3;
inline constexpr double kSigmaSearchHi = 1e6;

// Exact inverse of the randomized-response advantage at a given resampling
// probability kappa_pi.
double calibrate_grr_epsilon(double gamma, std::size_t m, double kappa_pi);

// Bisection against the uniform no-aux closed form; the advantage saturates
// at (m - 1) / (2m), so targets at or above that are unreachable.
double calibrate_oue_epsilon(double gamma, std::size_t m);

// Grid bracket over the omega plateaus, then bisection inside the bracket.
double calibrate_ss_epsilon(double gamma, std::size_t m);

double calibrate_laplace_epsilon(double gamma, std::size_t m);
double calibrate_gaussian_sigma(double gamma, std::size_t m);

// Noise scale for T-fold composed Gaussian noise meeting a target
// advantage over a uniform m-record universe.
double calibrate_gdp_sigma(double gamma, std::size_t m, int steps);

// Inverse of bound_uniform_bb in eps.
double calibrate_blackbox_epsilon(double gamma, std::size_t m,
                                  double delta = 0.0);

// Composed-GDP advantage bound as a function of sigma (exposed so callers
// can verify calibration round trips).
double gdp_advantage_bound(double sigma, std::size_t m, int steps);

}  // namespace radkit
