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

#include "radkit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "radkit/errors.hpp"
#include "radkit/stats.hpp"

namespace radkit {

std::string to_string(BoundSource source) {
  switch (source) {
    case BoundSource::kWorstCaseTv:
      return "worst-case-tv";
    case BoundSource::kOptimalEnumerated:
      return "optimal-enumerated";
    case BoundSource::kOptimalClosedForm:
      return "optimal-closed-form";
    case BoundSource::kFdpNoAux:
      return "fdp-no-aux";
    case BoundSource::kEpsDeltaNoAux:
      return "eps-delta-no-aux";
    case BoundSource::kPerfectRecoBlackbox:
      return "perfect-reco-blackbox";
    case BoundSource::kUniformBlackbox:
      return "uniform-blackbox";
    case BoundSource::kGdpComposed:
      return "gdp-composed";
    case BoundSource::kReroEpsilon:
      return "rero-pure-dp";
    case BoundSource::kReroFdp:
      return "rero-fdp";
  }
  return "unknown";
}

PriorStats prior_stats(const Universe& u, const DiscretePrior& prior,
                       const ErrorModel& error) {
  PriorStats s;
  s.kappa_pi = kappa_pi(prior);
  s.kappa_plus = kappa_plus(u, prior, error);
  s.kappa_minus = kappa_minus(u, prior, error);
  return s;
}

namespace {

// (e^eps - 1 + 2 delta) / (e^eps + 1), computed through e^{-eps}.
double tv_eps_delta(double eps, double delta) {
  double ee = std::exp(-eps);
  return (1.0 - ee + 2.0 * delta * ee) / (1.0 + ee);
}

void require_no_aux(const ThreatModel& threat, const char* which) {
  if (threat.aux.mode() != AuxMode::kNone) {
    throw ConfigError(std::string(which) +
                      " is valid only without auxiliary knowledge");
  }
}

}  // namespace

RadBound bound_worst_case(const Mechanism& mech, const DiscretePrior& prior) {
  RadBound b;
  b.source = BoundSource::kWorstCaseTv;
  b.value = mech.total_variation() * (1.0 - kappa_pi(prior));
  return b;
}

RadBound bound_worst_case_eps_delta(double eps, double delta,
                                    double kappa_pi_value) {
  RadBound b;
  b.source = BoundSource::kWorstCaseTv;
  b.value = tv_eps_delta(eps, delta) * (1.0 - kappa_pi_value);
  return b;
}

RadBound bound_optimal_enumerated(const Mechanism& mech,
                                  const Universe& universe,
                                  const DiscretePrior& prior,
                                  const ThreatModel& threat) {
  if (!mech.discrete_output()) {
    throw CapacityError(
        "continuous output space; use a closed form or the nested Monte "
        "Carlo estimator");
  }
  mech.output_count();  // capacity gate
  threat.error.check_compatible(universe);
  OptimalAttack scorer(mech, universe, prior, threat);
  std::size_t fibers = threat.aux.fiber_count();
  std::vector<double> w;
  double total = 0.0;
  mech.enumerate_outputs([&](const Output& theta) {
    for (std::size_t x = 0; x < fibers; ++x) {
      scorer.scores(theta, static_cast<int>(x), w);
      double best = w[0];
      for (double v : w) best = std::max(best, v);
      total += best;
    }
  });
  RadBound b;
  b.source = BoundSource::kOptimalEnumerated;
  b.aux = threat.aux.mode();
  b.eta = threat.error.eta();
  b.value = total;
  return b;
}

namespace {

// Randomized response without auxiliary knowledge at threshold eta:
// (p - q) (1 - sum_theta pi_theta inf over z' in S_eta(theta) of the prior
// mass of S_eta(z')).
double grr_no_aux_value(const GrrMechanism& grr, const Universe& universe,
                        const DiscretePrior& prior, const ErrorModel& error) {
  std::size_t m = universe.size();
  std::vector<double> success_mass(m, 0.0);
  for (RecordId zp = 0; zp < m; ++zp) {
    double s = 0.0;
    for (RecordId z = 0; z < m; ++z) {
      if (error.success(universe, zp, z)) s += prior.weight(z);
    }
    success_mass[zp] = s;
  }
  double correction = 0.0;
  for (RecordId theta = 0; theta < m; ++theta) {
    double inf = 2.0;
    for (RecordId zp = 0; zp < m; ++zp) {
      if (error.success(universe, zp, theta)) {
        inf = std::min(inf, success_mass[zp]);
      }
    }
    correction += prior.weight(theta) * inf;
  }
  return (grr.p() - grr.q()) * (1.0 - correction);
}

// OUE without auxiliary knowledge, uniform prior, perfect reconstruction:
// (e^eps - 1) / (2m) * (1 - (e^eps / (1 + e^eps))^{m-1}), which converges to
// (m - 1) / (2m) as eps grows. Evaluated through expm1/log1p so that large
// budgets neither overflow nor collapse p to exactly 1.
double oue_uniform_value(double eps, std::size_t m) {
  double mm = static_cast<double>(m);
  if (eps > 350.0) return (mm - 1.0) / (2.0 * mm);
  double ee = std::exp(-eps);
  // 1 - p^{m-1} with log(p) = -log1p(e^{-eps}).
  double one_minus_pm1 = -std::expm1(-(mm - 1.0) * std::log1p(ee));
  return std::expm1(eps) * one_minus_pm1 / (2.0 * mm);
}

bool perfect_reconstruction(const ErrorModel& error) {
  if (error.kind() == ErrorKind::kExactMatch) return error.eta() < 1.0;
  return error.eta() == 0.0;
}

}  // namespace

RadBound bound_closed_form(const Mechanism& mech, const Universe& universe,
                           const DiscretePrior& prior,
                           const ThreatModel& threat) {
  RadBound b;
  b.source = BoundSource::kOptimalClosedForm;
  b.aux = threat.aux.mode();
  b.eta = threat.error.eta();
  std::size_t m = universe.size();
  double kpi = kappa_pi(prior);
  bool uniform = prior.is_uniform();
  bool eta0 = perfect_reconstruction(threat.error);

  switch (mech.kind()) {
    case MechanismKind::kGrr: {
      const auto& grr = static_cast<const GrrMechanism&>(mech);
      if (threat.aux.mode() == AuxMode::kFull) {
        b.value = mech.total_variation() * (1.0 - kpi);
        return b;
      }
      if (threat.aux.mode() == AuxMode::kNone) {
        threat.error.check_compatible(universe);
        b.value = grr_no_aux_value(grr, universe, prior, threat.error);
        return b;
      }
      break;
    }
    case MechanismKind::kOue: {
      const auto& oue = static_cast<const OueMechanism&>(mech);
      if (threat.aux.mode() == AuxMode::kFull) {
        b.value = mech.total_variation() * (1.0 - kpi);
        return b;
      }
      if (threat.aux.mode() == AuxMode::kNone && uniform && eta0) {
        b.value = oue_uniform_value(oue.epsilon(), m);
        return b;
      }
      break;
    }
    case MechanismKind::kSs: {
      const auto& ss = static_cast<const SsMechanism&>(mech);
      if (threat.aux.mode() == AuxMode::kNone && uniform && eta0) {
        double w = static_cast<double>(ss.omega());
        b.value = (ss.p() * static_cast<double>(m) - w) /
                  (static_cast<double>(m) * w);
        return b;
      }
      break;
    }
    case MechanismKind::kLaplace: {
      const auto& lap = static_cast<const LaplaceMechanism&>(mech);
      if (threat.aux.mode() == AuxMode::kNone && uniform && eta0 &&
          lap.sensitivity() == 1.0) {
        double eps = mech.epsilon();
        double mm = static_cast<double>(m);
        b.value = (mm - 1.0) / mm *
                  (-std::expm1(-eps / (2.0 * (mm - 1.0))));
        return b;
      }
      break;
    }
    case MechanismKind::kGaussian: {
      const auto& gauss = static_cast<const GaussianMechanism&>(mech);
      if (threat.aux.mode() == AuxMode::kNone && uniform && eta0 &&
          gauss.sensitivity() == 1.0) {
        double mm = static_cast<double>(m);
        b.value = (mm - 1.0) / mm *
                  (2.0 * norm_cdf(1.0 / (2.0 * gauss.sigma() * (mm - 1.0))) -
                   1.0);
        return b;
      }
      break;
    }
  }
  throw ConfigError(
      "no closed form for this mechanism / prior / aux / eta combination; "
      "use enumeration or the worst-case bound");
}

RadBound bound_fdp(const Tradeoff& tf, const PriorStats& stats, bool discrete,
                   double eta) {
  RadBound b;
  b.source = BoundSource::kFdpNoAux;
  b.aux = AuxMode::kNone;
  b.eta = eta;
  double value = tradeoff_gain_max(tf, stats.kappa_minus, stats.kappa_plus);
  if (discrete && stats.kappa_pi < 1.0) {
    double scale = 1.0 - stats.kappa_pi;
    double refined =
        scale * tradeoff_gain_max(tf, 0.0, stats.kappa_plus / scale);
    value = std::min(value, refined);
  }
  b.value = std::max(value, 0.0);
  return b;
}

RadBound bound_fdp(const Tradeoff& tf, const Universe& u,
                   const DiscretePrior& prior, const ThreatModel& threat) {
  require_no_aux(threat, "the trade-off-function bound");
  RadBound b = bound_fdp(tf, prior_stats(u, prior, threat.error), true,
                         threat.error.eta());
  return b;
}

RadBound bound_epsdelta(double eps, double delta, const PriorStats& stats,
                        double eta) {
  double ee = std::exp(-eps);
  double branch1 = stats.kappa_plus * std::expm1(eps) + delta;
  double branch2 = (1.0 - stats.kappa_minus) * (1.0 - ee) + delta * ee;
  double branch3 = tv_eps_delta(eps, delta) * (1.0 - stats.kappa_pi);
  RadBound b;
  b.source = BoundSource::kEpsDeltaNoAux;
  b.aux = AuxMode::kNone;
  b.eta = eta;
  b.value = std::min({branch1, branch2, branch3});
  return b;
}

RadBound bound_epsdelta(double eps, double delta, const Universe& u,
                        const DiscretePrior& prior, const ThreatModel& threat) {
  require_no_aux(threat, "the (eps, delta) bound");
  return bound_epsdelta(eps, delta, prior_stats(u, prior, threat.error),
                        threat.error.eta());
}

double per_record_advantage_cap(double eps, double delta, std::size_t m) {
  double ee = std::exp(-eps);
  double mm = static_cast<double>(m);
  return (mm - 1.0) * (1.0 - ee + mm * delta * ee) / (1.0 + (mm - 1.0) * ee);
}

RadBound bound_perfect_reco_bb(double eps, double delta,
                               const DiscretePrior& prior) {
  std::size_t m = prior.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto spread = [&](std::size_t i) {
    double w = prior.weight(static_cast<RecordId>(i));
    return w * (1.0 - w);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return spread(a) > spread(b);
                   });

  double cap = per_record_advantage_cap(eps, delta, m);
  double tv = tv_eps_delta(eps, delta);

  // Largest K whose first K records can all sit at their local cap
  // tv * (1 - pi_i) without exceeding the total advantage budget.
  double prefix_weight = 0.0;   // sum of pi over the first K records
  double prefix_spread = 0.0;   // sum of pi (1 - pi)
  double best_spread = 0.0;
  double residual = cap;
  std::size_t K = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double w = prior.weight(static_cast<RecordId>(order[i]));
    double next_weight = prefix_weight + w;
    double k = static_cast<double>(i + 1);
    double r = cap - (k - next_weight) * tv;
    if (r < 0.0) break;
    prefix_weight = next_weight;
    prefix_spread += w * (1.0 - w);
    residual = r;
    best_spread = prefix_spread;
    K = i + 1;
  }
  double tail_max = 0.0;
  for (std::size_t i = K; i < m; ++i) {
    tail_max =
        std::max(tail_max, prior.weight(static_cast<RecordId>(order[i])));
  }
  RadBound b;
  b.source = BoundSource::kPerfectRecoBlackbox;
  b.aux = AuxMode::kNone;
  b.eta = 0.0;
  b.value = tv * best_spread + (K == m ? 0.0 : residual * tail_max);
  return b;
}

RadBound bound_uniform_bb(double eps, double delta, std::size_t m) {
  double mm = static_cast<double>(m);
  RadBound b;
  b.source = BoundSource::kUniformBlackbox;
  b.aux = AuxMode::kNone;
  b.eta = 0.0;
  b.value = per_record_advantage_cap(eps, delta, m) / mm;
  return b;
}

double bound_rero_pure_dp(double eps, double kappa_plus) {
  return std::min(1.0, kappa_plus * std::exp(eps));
}

double bound_rero_fdp(const Tradeoff& tf, double kappa_plus) {
  return 1.0 - tf.eval(kappa_plus);
}

double calibrate_rero_fdp_epsilon(double gamma, double kappa_plus) {
  if (gamma <= kappa_plus) return 0.0;
  if (gamma >= 1.0) {
    throw UnreachableRiskError("unreachable risk level (supremum 1)", 1.0);
  }
  // Branch 1 - f = e^eps kappa+ while it is the active branch, then
  // 1 - (1 - kappa+) e^{-eps}.
  double e1 = gamma / kappa_plus;
  if (1.0 - e1 * kappa_plus >= (1.0 - kappa_plus) / e1) return std::log(e1);
  return std::log((1.0 - kappa_plus) / (1.0 - gamma));
}

//===----------------------------------------------------------------------===//
// Calibration
//===----------------------------------------------------------------------===//

namespace {

[[noreturn]] void unreachable_risk(double supremum) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", supremum);
  throw UnreachableRiskError(
      "unreachable risk level (supremum " + std::string(buf) + ")", supremum);
}

void check_target(double gamma) {
  if (!(gamma > 0.0)) {
    throw ConfigError("target risk must be positive");
  }
}

// Bisection for an increasing bound function; returns the parameter where
// bound(x) = gamma within kCalibrationTolerance in bound space.
template <typename F>
double bisect_increasing(F&& bound, double lo, double hi, double gamma) {
  double flo = bound(lo), fhi = bound(hi);
  if (gamma < flo || gamma > fhi) {
    throw ConfigError("target risk outside the bracket");
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    double f = bound(mid);
    if (std::fabs(f - gamma) <= 1e-12) return mid;
    if (f < gamma) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double calibrate_grr_epsilon(double gamma, std::size_t m, double kappa_pi_v) {
  check_target(gamma);
  double sup = 1.0 - kappa_pi_v;
  if (gamma >= sup) unreachable_risk(sup);
  double num = 1.0 + gamma * static_cast<double>(m - 1) / (1.0 - kappa_pi_v);
  double den = 1.0 - gamma / (1.0 - kappa_pi_v);
  return std::log(num / den);
}

double calibrate_oue_epsilon(double gamma, std::size_t m) {
  check_target(gamma);
  double mm = static_cast<double>(m);
  double sup = (mm - 1.0) / (2.0 * mm);
  if (gamma >= sup) unreachable_risk(sup);
  auto bound = [m](double eps) { return oue_uniform_value(eps, m); };
  if (bound(kEpsSearchHi) < gamma) unreachable_risk(sup);
  return bisect_increasing(bound, 0.0, kEpsSearchHi, gamma);
}

double calibrate_ss_epsilon(double gamma, std::size_t m) {
  check_target(gamma);
  double mm = static_cast<double>(m);
  double sup = (mm - 1.0) / mm;
  if (gamma >= sup) unreachable_risk(sup);
  auto bound = [m](double eps) {
    SsMechanism ss(m, eps);
    double w = static_cast<double>(ss.omega());
    return (ss.p() * static_cast<double>(m) - w) /
           (static_cast<double>(m) * w);
  };
  if (bound(kEpsSearchHi) < gamma) unreachable_risk(sup);
  // The bound steps upward where omega changes; scan for a bracket first and
  // bisect inside it, where the bound is continuous and increasing.
  constexpr double kStep = 0.05;
  double lo = 0.0, flo = bound(lo);
  if (gamma <= flo) return lo;
  double hi = lo;
  while (hi < kEpsSearchHi) {
    hi = std::min(hi + kStep, kEpsSearchHi);
    double fhi = bound(hi);
    if (fhi >= gamma) {
      double eps = bisect_increasing(bound, lo, hi, gamma);
      if (std::fabs(bound(eps) - gamma) > kCalibrationTolerance) {
        throw UnreachableRiskError(
            "risk level falls inside a discontinuity of the subset-selection "
            "bound",
            bound(eps));
      }
      return eps;
    }
    lo = hi;
  }
  unreachable_risk(sup);
}

double calibrate_laplace_epsilon(double gamma, std::size_t m) {
  check_target(gamma);
  double mm = static_cast<double>(m);
  double sup = (mm - 1.0) / mm;
  if (gamma >= sup) unreachable_risk(sup);
  double eps = -2.0 * (mm - 1.0) * std::log1p(-gamma * mm / (mm - 1.0));
  return eps;
}

double calibrate_gaussian_sigma(double gamma, std::size_t m) {
  check_target(gamma);
  double mm = static_cast<double>(m);
  double sup = (mm - 1.0) / mm;
  if (gamma >= sup) unreachable_risk(sup);
  double q = norm_quantile(0.5 * (gamma * mm / (mm - 1.0) + 1.0));
  return 1.0 / (2.0 * (mm - 1.0) * q);
}

double gdp_advantage_bound(double sigma, std::size_t m, int steps) {
  double mm = static_cast<double>(m);
  double mu = std::sqrt(static_cast<double>(steps)) / sigma;
  double alpha_free = 1.0 - norm_cdf(mu / 2.0);
  double alpha = std::min(1.0 / (mm - 1.0), alpha_free);
  double value =
      1.0 - norm_cdf(norm_quantile(1.0 - alpha) - mu) - alpha;
  return (mm - 1.0) / mm * value;
}

double calibrate_gdp_sigma(double gamma, std::size_t m, int steps) {
  check_target(gamma);
  if (steps < 1) throw ConfigError("composition needs at least one step");
  double mm = static_cast<double>(m);
  double sup = (mm - 1.0) / mm;
  if (gamma >= sup) unreachable_risk(sup);
  double sqrt_t = std::sqrt(static_cast<double>(steps));

  // Constrained-maximizer branch: alpha* = 1 / (m - 1).
  double alpha = 1.0 / (mm - 1.0);
  double inner = 1.0 - mm / (mm - 1.0) * gamma - alpha;
  if (inner > 0.0 && inner < 1.0) {
    double denom = norm_quantile(1.0 - alpha) - norm_quantile(inner);
    if (denom > 0.0) {
      double sigma = sqrt_t / denom;
      double mu = sqrt_t / sigma;
      if (1.0 - norm_cdf(mu / 2.0) >= alpha) return sigma;
    }
  }
  // Free-maximizer branch: the bound collapses to the total-variation form
  // (m-1)/m (2 Phi(mu/2) - 1).
  double q = norm_quantile(0.5 * (gamma * mm / (mm - 1.0) + 1.0));
  double sigma = sqrt_t / (2.0 * q);
  double mu = sqrt_t / sigma;
  if (1.0 - norm_cdf(mu / 2.0) <= 1.0 / (mm - 1.0)) return sigma;

  // Numerical fallback: the bound is decreasing in sigma.
  auto decreasing = [&](double s) { return gdp_advantage_bound(s, m, steps); };
  double lo = kSigmaSearchLo, hi = kSigmaSearchHi;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (decreasing(mid) > gamma) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double calibrate_blackbox_epsilon(double gamma, std::size_t m, double delta) {
  check_target(gamma);
  double mm = static_cast<double>(m);
  double sup = (mm - 1.0) / mm;
  if (gamma >= sup) unreachable_risk(sup);
  double c = gamma * mm / (mm - 1.0);
  double e = (1.0 - delta * mm + c * (mm - 1.0)) / (1.0 - c);
  if (!(e > 0.0)) unreachable_risk(sup);
  return std::log(e);
}

}  // namespace radkit
