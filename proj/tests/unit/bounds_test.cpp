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

#include <cmath>

#include "gtest/gtest.h"
#include "radkit/errors.hpp"

namespace radkit {
namespace {

ThreatModel no_aux(const Universe& u, double eta = 0.0,
                   ErrorKind kind = ErrorKind::kExactMatch) {
  return {ErrorModel(kind, eta), AuxMap::none(u)};
}

ThreatModel full_aux(const Universe& u, double eta = 0.0,
                     ErrorKind kind = ErrorKind::kExactMatch) {
  return {ErrorModel(kind, eta), AuxMap::full(u)};
}

TEST(WorstCase, Examples) {
  GrrMechanism grr(3, std::log(2.0));
  DiscretePrior uniform3 = DiscretePrior::uniform(3);
  EXPECT_NEAR(bound_worst_case(grr, uniform3).value, 1.0 / 6.0, 1e-15);

  EXPECT_NEAR(bound_worst_case_eps_delta(0.0, 0.0, 0.25).value, 0.0, 1e-15);
  EXPECT_NEAR(bound_worst_case_eps_delta(1.0, 0.0, 0.1).value,
              (std::exp(1.0) - 1.0) / (std::exp(1.0) + 1.0) * 0.9, 1e-12);
}

TEST(OptimalEnumerated, GrrMatchesClosedForm) {
  Universe u = Universe::indexed(3);
  DiscretePrior prior = DiscretePrior::uniform(3);
  GrrMechanism grr(3, std::log(2.0));
  EXPECT_NEAR(bound_optimal_enumerated(grr, u, prior, no_aux(u)).value,
              1.0 / 6.0, 1e-12);
  // With eps = 0 every weight vanishes.
  GrrMechanism flat(3, 0.0);
  EXPECT_NEAR(bound_optimal_enumerated(flat, u, prior, no_aux(u)).value, 0.0,
              1e-15);
  OueMechanism oue_flat(3, 0.0);
  EXPECT_NEAR(bound_optimal_enumerated(oue_flat, u, prior, no_aux(u)).value,
              0.0, 1e-15);
}

TEST(OptimalEnumerated, BinaryFullAuxIsTvTimesSpread) {
  Universe u = Universe::indexed(2);
  DiscretePrior prior = DiscretePrior::uniform(2);
  for (double eps : {0.3, std::log(2.0), 2.0}) {
    GrrMechanism grr(2, eps);
    double expected = (std::exp(eps) - 1.0) / (std::exp(eps) + 1.0) * 0.5;
    EXPECT_NEAR(bound_optimal_enumerated(grr, u, prior, full_aux(u)).value,
                expected, 1e-12);
  }
}

// Closed forms agree with the enumeration oracle wherever both apply.
TEST(ClosedForm, MatchesEnumeration) {
  for (std::size_t m : {2, 3, 5, 8, 12}) {
    Universe u = Universe::indexed(m);
    DiscretePrior uniform = DiscretePrior::uniform(m);
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = 1.0 + static_cast<double>(i);
    DiscretePrior skew = DiscretePrior::from_weights(w);
    for (double eps : {0.5, std::log(2.0), 2.0}) {
      GrrMechanism grr(m, eps);
      OueMechanism oue(m, eps);
      SsMechanism ss(m, eps);
      for (const DiscretePrior* prior : {&uniform, &skew}) {
        // Full-aux closed forms hold for any prior.
        EXPECT_NEAR(bound_closed_form(grr, u, *prior, full_aux(u)).value,
                    bound_optimal_enumerated(grr, u, *prior, full_aux(u)).value,
                    1e-9);
        EXPECT_NEAR(bound_closed_form(oue, u, *prior, full_aux(u)).value,
                    bound_optimal_enumerated(oue, u, *prior, full_aux(u)).value,
                    1e-9);
        // The no-aux randomized-response formula holds for any prior too.
        EXPECT_NEAR(bound_closed_form(grr, u, *prior, no_aux(u)).value,
                    bound_optimal_enumerated(grr, u, *prior, no_aux(u)).value,
                    1e-9);
      }
      EXPECT_NEAR(bound_closed_form(oue, u, uniform, no_aux(u)).value,
                  bound_optimal_enumerated(oue, u, uniform, no_aux(u)).value,
                  1e-9)
          << "oue m=" << m << " eps=" << eps;
      EXPECT_NEAR(bound_closed_form(ss, u, uniform, no_aux(u)).value,
                  bound_optimal_enumerated(ss, u, uniform, no_aux(u)).value,
                  1e-9)
          << "ss m=" << m << " eps=" << eps;
    }
  }
}

// The general-threshold randomized-response formula evaluated on a numeric
// embedding, cross-checked against enumeration.
TEST(ClosedForm, GrrWindowedErrorMatchesEnumeration) {
  for (std::size_t m : {4, 7, 10}) {
    Universe u = Universe::indexed(m);
    DiscretePrior uniform = DiscretePrior::uniform(m);
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = 1.0 + (i % 3);
    DiscretePrior skew = DiscretePrior::from_weights(w);
    for (double eta : {0.0, 1.0, 2.0}) {
      for (const DiscretePrior* prior : {&uniform, &skew}) {
        GrrMechanism grr(m, 1.0);
        ThreatModel t = no_aux(u, eta, ErrorKind::kAbsoluteDifference);
        EXPECT_NEAR(bound_closed_form(grr, u, *prior, t).value,
                    bound_optimal_enumerated(grr, u, *prior, t).value, 1e-9)
            << "m=" << m << " eta=" << eta;
      }
    }
  }
}

TEST(ClosedForm, OueSaturatesNearHalf) {
  Universe u = Universe::indexed(10);
  DiscretePrior prior = DiscretePrior::uniform(10);
  OueMechanism oue(10, 40.0);
  EXPECT_NEAR(bound_closed_form(oue, u, prior, no_aux(u)).value, 9.0 / 20.0,
              1e-9);
}

TEST(ClosedForm, SsExample) {
  Universe u = Universe::indexed(10);
  DiscretePrior prior = DiscretePrior::uniform(10);
  SsMechanism ss(10, std::log(4.0));
  EXPECT_NEAR(bound_closed_form(ss, u, prior, no_aux(u)).value, 0.15, 1e-12);
}

TEST(ClosedForm, UnsupportedCombinationThrows) {
  Universe u = Universe::indexed(5);
  std::vector<double> w = {0.5, 0.2, 0.1, 0.1, 0.1};
  DiscretePrior skew = DiscretePrior::from_weights(w);
  SsMechanism ss(5, 1.0);
  EXPECT_THROW(bound_closed_form(ss, u, skew, no_aux(u)), ConfigError);
  OueMechanism oue(5, 1.0);
  EXPECT_THROW(bound_closed_form(oue, u, skew, no_aux(u)), ConfigError);
}

TEST(FdpBound, GaussianClosedFormExample) {
  Universe u = Universe::indexed(10);
  DiscretePrior prior = DiscretePrior::uniform(10);
  RadBound b = bound_fdp(Tradeoff::gaussian(1.0), u, prior, no_aux(u));
  EXPECT_NEAR(b.value, 0.271, 5e-4);
  EXPECT_NEAR(bound_fdp(Tradeoff::gaussian(0.0), u, prior, no_aux(u)).value,
              0.0, 1e-12);
}

TEST(FdpBound, RequiresNoAux) {
  Universe u = Universe::indexed(4);
  DiscretePrior prior = DiscretePrior::uniform(4);
  EXPECT_THROW(bound_fdp(Tradeoff::gaussian(1.0), u, prior, full_aux(u)),
               ConfigError);
  EXPECT_THROW(bound_epsdelta(1.0, 0.0, u, prior, full_aux(u)), ConfigError);
}

TEST(EpsDeltaBound, ThreeBranchExample) {
  Universe u = Universe::indexed(10);
  DiscretePrior prior = DiscretePrior::uniform(10);
  EXPECT_NEAR(bound_epsdelta(1.0, 0.0, u, prior, no_aux(u)).value,
              0.1 * (std::exp(1.0) - 1.0), 1e-12);
  EXPECT_NEAR(bound_epsdelta(0.0, 0.0, u, prior, no_aux(u)).value, 0.0,
              1e-15);
  // delta = 1 blows up the first branch; the returned minimum must not
  // exceed the third branch.
  double b = bound_epsdelta(0.5, 1.0, u, prior, no_aux(u)).value;
  double third = (std::exp(0.5) + 1.0) / (std::exp(0.5) + 1.0) * 0.9;
  EXPECT_LE(b, third + 1e-12);
}

// The (eps, delta) trade-off bound evaluated at a point interval reproduces
// the explicit three-branch minimum.
TEST(FdpBound, EpsDeltaTradeoffReproducesBranchBound) {
  Universe u = Universe::indexed(10);
  DiscretePrior prior = DiscretePrior::uniform(10);
  for (double eps = 0.25; eps <= 6.0; eps += 0.25) {
    double fdp =
        bound_fdp(Tradeoff::eps_delta(eps, 0.0), u, prior, no_aux(u)).value;
    double branches = bound_epsdelta(eps, 0.0, u, prior, no_aux(u)).value;
    EXPECT_NEAR(fdp, branches, 1e-10) << "eps=" << eps;
  }
}

TEST(FdpBound, NeverExceedsFirstTwoBranches) {
  Universe u = Universe::integer_range(0, 20);
  std::vector<double> w(21);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 + (i % 5);
  DiscretePrior prior = DiscretePrior::from_weights(w);
  ThreatModel t = no_aux(u, 2.0, ErrorKind::kAbsoluteDifference);
  PriorStats stats = prior_stats(u, prior, t.error);
  for (double eps = 0.25; eps <= 8.0; eps += 0.25) {
    double fdp = bound_fdp(Tradeoff::eps_delta(eps, 1e-5), stats, true,
                           t.error.eta())
                     .value;
    double b1 = stats.kappa_plus * (std::exp(eps) - 1.0) + 1e-5;
    double b2 = ((1.0 - stats.kappa_minus) * (std::exp(eps) - 1.0) + 1e-5) /
                std::exp(eps);
    EXPECT_LE(fdp, std::min(b1, b2) + 1e-12);
  }
}

TEST(PerfectRecoBlackbox, TwoPointPriorRecoversWorstCase) {
  for (std::size_t m : {5, 10}) {
    DiscretePrior prior = DiscretePrior::two_point(m, 0, 1);
    for (double eps : {0.5, 1.0, 3.0}) {
      double expected =
          bound_worst_case_eps_delta(eps, 0.0, kappa_pi(prior)).value;
      EXPECT_NEAR(bound_perfect_reco_bb(eps, 0.0, prior).value, expected,
                  1e-12)
          << "m=" << m << " eps=" << eps;
    }
  }
}

TEST(PerfectRecoBlackbox, UniformEqualsUniformSpecialization) {
  for (std::size_t m : {2, 5, 10, 50}) {
    DiscretePrior prior = DiscretePrior::uniform(m);
    for (double eps : {0.1, 1.0, 4.0, 10.0}) {
      for (double delta : {0.0, 1e-5, 1e-2}) {
        EXPECT_NEAR(bound_perfect_reco_bb(eps, delta, prior).value,
                    bound_uniform_bb(eps, delta, m).value, 1e-12)
            << "m=" << m << " eps=" << eps << " delta=" << delta;
      }
    }
  }
}

TEST(PerfectRecoBlackbox, ZeroAtZeroBudget) {
  DiscretePrior prior = DiscretePrior::from_weights({0.4, 0.3, 0.2, 0.1});
  EXPECT_NEAR(bound_perfect_reco_bb(0.0, 0.0, prior).value, 0.0, 1e-15);
}

TEST(UniformBlackbox, ExamplesAndCapConsistency) {
  EXPECT_NEAR(bound_uniform_bb(std::log(2.0), 0.0, 3).value, 1.0 / 6.0,
              1e-13);
  EXPECT_NEAR(bound_uniform_bb(0.0, 0.0, 7).value, 0.0, 1e-15);
  for (double eps : {0.5, 2.0}) {
    for (double delta : {0.0, 1e-4}) {
      EXPECT_NEAR(10 * bound_uniform_bb(eps, delta, 10).value,
                  per_record_advantage_cap(eps, delta, 10), 1e-12);
    }
  }
}

TEST(ReroBounds, Examples) {
  EXPECT_NEAR(bound_rero_pure_dp(1.0, 0.1), 0.1 * std::exp(1.0), 1e-12);
  EXPECT_NEAR(bound_rero_pure_dp(0.0, 0.37), 0.37, 1e-15);
  EXPECT_DOUBLE_EQ(bound_rero_pure_dp(5.0, 0.5), 1.0);

  EXPECT_NEAR(bound_rero_fdp(Tradeoff::gaussian(0.0), 0.2), 0.2, 1e-12);
  EXPECT_NEAR(bound_rero_fdp(Tradeoff::eps_delta(1.0, 0.0), 0.1),
              1.0 - 0.7281718171540955, 1e-12);
  EXPECT_NEAR(bound_rero_fdp(Tradeoff::eps_delta(1.0, 0.0), 1.0), 1.0, 1e-12);
}

// Ordering of the black-box family on the unary-encoding configuration:
// attack-optimal <= perfect-reconstruction <= generic (eps, delta).
TEST(Ordering, BlackboxFamilyOnOue) {
  std::size_t m = 10;
  Universe u = Universe::indexed(m);
  DiscretePrior prior = DiscretePrior::uniform(m);
  ThreatModel t = no_aux(u);
  double delta = 1e-5;
  for (double eps = 0.5; eps <= 14.0 + 1e-9; eps += 0.5) {
    OueMechanism oue(m, eps);
    double optimal = bound_closed_form(oue, u, prior, t).value;
    double bb = bound_perfect_reco_bb(eps, delta, prior).value;
    double generic = bound_epsdelta(eps, delta, u, prior, t).value;
    EXPECT_LE(optimal, bb + 1e-9) << "eps=" << eps;
    EXPECT_LE(bb, generic + 1e-9) << "eps=" << eps;
    if (eps >= 2.0 && eps <= 8.0) {
      EXPECT_GT(bb - optimal, 1e-4) << "eps=" << eps;
      EXPECT_GT(generic - bb, 1e-4) << "eps=" << eps;
    }
  }
}

TEST(Ordering, AllBoundsZeroAtZeroAndNondecreasing) {
  std::size_t m = 8;
  Universe u = Universe::indexed(m);
  DiscretePrior prior = DiscretePrior::uniform(m);
  ThreatModel t = no_aux(u);
  double prev_closed = -1.0, prev_bb = -1.0, prev_eps = -1.0, prev_wc = -1.0;
  for (double eps = 0.0; eps <= 10.0; eps += 0.25) {
    GrrMechanism grr(m, eps);
    double closed = bound_closed_form(grr, u, prior, t).value;
    double bb = bound_perfect_reco_bb(eps, 0.0, prior).value;
    double ed = bound_epsdelta(eps, 0.0, u, prior, t).value;
    double wc = bound_worst_case(grr, prior).value;
    if (eps == 0.0) {
      EXPECT_NEAR(closed, 0.0, 1e-15);
      EXPECT_NEAR(bb, 0.0, 1e-15);
      EXPECT_NEAR(ed, 0.0, 1e-15);
      EXPECT_NEAR(wc, 0.0, 1e-15);
    }
    EXPECT_GE(closed, prev_closed);
    EXPECT_GE(bb, prev_bb);
    EXPECT_GE(ed, prev_eps);
    EXPECT_GE(wc, prev_wc);
    // Advantage bounds live in [0, 1 - kappa_pi].
    double spread = 1.0 - kappa_pi(prior);
    for (double v : {closed, bb, wc}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, spread + 1e-12);
    }
    prev_closed = closed;
    prev_bb = bb;
    prev_eps = ed;
    prev_wc = wc;
  }
}

//===----------------------------------------------------------------------===//
// Calibration
//===----------------------------------------------------------------------===//

TEST(Calibrate, GrrClosedInverse) {
  EXPECT_NEAR(calibrate_grr_epsilon(0.1, 2, 0.5), std::log(1.5), 1e-12);
  // Forward consistency at m = 100: the bound at the returned eps is the
  // target exactly.
  double eps = calibrate_grr_epsilon(0.1, 100, 0.01);
  double back = (std::exp(eps) - 1.0) / (std::exp(eps) + 99.0) * 0.99;
  EXPECT_NEAR(back, 0.1, 1e-12);
}

TEST(Calibrate, RoundTripsWithinTolerance) {
  std::size_t m = 10;
  Universe u = Universe::indexed(m);
  DiscretePrior prior = DiscretePrior::uniform(m);
  ThreatModel t = no_aux(u);
  for (int i = 1; i <= 20; ++i) {
    double frac = static_cast<double>(i) / 21.0;
    {
      GrrMechanism probe(m, 0.2 + 0.4 * i);
      double gamma = bound_closed_form(probe, u, prior, t).value;
      double eps = calibrate_grr_epsilon(gamma, m, kappa_pi(prior));
      GrrMechanism mech(m, eps);
      EXPECT_NEAR(bound_closed_form(mech, u, prior, t).value, gamma, 1e-6);
    }
    {
      double gamma = frac * (m - 1.0) / (2.0 * m) * 0.98;
      double eps = calibrate_oue_epsilon(gamma, m);
      OueMechanism mech(m, eps);
      EXPECT_NEAR(bound_closed_form(mech, u, prior, t).value, gamma, 1e-6);
    }
    {
      SsMechanism probe(m, 0.1 + 0.35 * i);
      double gamma = bound_closed_form(probe, u, prior, t).value;
      if (gamma > 0.0) {
        double eps = calibrate_ss_epsilon(gamma, m);
        SsMechanism mech(m, eps);
        EXPECT_NEAR(bound_closed_form(mech, u, prior, t).value, gamma, 1e-6);
      }
    }
    {
      double gamma = frac * (m - 1.0) / m * 0.9;
      double eps = calibrate_laplace_epsilon(gamma, m);
      LaplaceMechanism mech(u.embedding(), eps, 1.0, std::nullopt);
      EXPECT_NEAR(bound_closed_form(mech, u, prior, t).value, gamma, 1e-6);
    }
    {
      double gamma = frac * (m - 1.0) / m * 0.9;
      double sigma = calibrate_gaussian_sigma(gamma, m);
      GaussianMechanism mech(u.embedding(), sigma, 1.0);
      EXPECT_NEAR(bound_closed_form(mech, u, prior, t).value, gamma, 1e-6);
    }
  }
}

TEST(Calibrate, GdpCompositionExample) {
  double sigma = calibrate_gdp_sigma(0.1, 10, 100);
  EXPECT_GT(sigma, 21.5);
  EXPECT_LT(sigma, 22.5);
  EXPECT_NEAR(gdp_advantage_bound(sigma, 10, 100), 0.1, 1e-9);
  // Both maximizer branches round-trip.
  for (double gamma : {0.02, 0.05, 0.1, 0.3, 0.5, 0.7, 0.85}) {
    double s = calibrate_gdp_sigma(gamma, 10, 100);
    EXPECT_NEAR(gdp_advantage_bound(s, 10, 100), gamma, 1e-6) << gamma;
  }
}

TEST(Calibrate, BlackboxInverse) {
  for (double eps : {0.5, 1.0, 2.0, 4.0}) {
    double gamma = bound_uniform_bb(eps, 0.0, 10).value;
    EXPECT_NEAR(calibrate_blackbox_epsilon(gamma, 10), eps, 1e-10);
    double gamma_d = bound_uniform_bb(eps, 1e-5, 10).value;
    EXPECT_NEAR(calibrate_blackbox_epsilon(gamma_d, 10, 1e-5), eps, 1e-10);
  }
}

TEST(Calibrate, UnreachableTargets) {
  try {
    calibrate_oue_epsilon(0.6, 10);
    FAIL() << "expected UnreachableRiskError";
  } catch (const UnreachableRiskError& e) {
    EXPECT_NEAR(e.supremum(), 0.45, 1e-12);
    EXPECT_NE(std::string(e.what()).find("0.45"), std::string::npos);
  }
  EXPECT_THROW(calibrate_grr_epsilon(0.95, 10, 0.1), UnreachableRiskError);
  EXPECT_THROW(calibrate_laplace_epsilon(0.95, 10), UnreachableRiskError);
  EXPECT_THROW(calibrate_gdp_sigma(0.95, 10, 100), UnreachableRiskError);
}

// Calibrating with the advantage bound admits a larger budget (and hence
// less noise) than inverting the prior success-probability bound at the
// same risk level.
TEST(Calibrate, AdvantageBeatsSuccessProbabilityForLaplace) {
  std::size_t m = 10;
  double kplus = 0.1;
  for (double gamma = 0.12; gamma <= 0.8; gamma += 0.034) {
    double eps_adv = calibrate_laplace_epsilon(gamma, m);
    double eps_rero = calibrate_rero_fdp_epsilon(gamma, kplus);
    EXPECT_GT(eps_adv, eps_rero) << "gamma=" << gamma;
  }
}

}  // namespace
}  // namespace radkit
