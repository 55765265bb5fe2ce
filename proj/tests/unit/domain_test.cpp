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

#include "radkit/domain.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "gtest/gtest.h"
#include "radkit/errors.hpp"

namespace radkit {
namespace {

TEST(KappaPi, Examples) {
  EXPECT_DOUBLE_EQ(kappa_pi(DiscretePrior::uniform(4)), 0.25);
  EXPECT_DOUBLE_EQ(kappa_pi(DiscretePrior::from_weights({0, 0, 1, 0})), 1.0);
  EXPECT_DOUBLE_EQ(kappa_pi(DiscretePrior::from_weights({0.5, 0.25, 0.25})),
                   0.375);
}

TEST(KappaPlus, ExactMatchUniform) {
  Universe u = Universe::indexed(10);
  DiscretePrior prior = DiscretePrior::uniform(10);
  ErrorModel err(ErrorKind::kExactMatch, 0.0);
  EXPECT_DOUBLE_EQ(kappa_plus(u, prior, err), 0.1);
  EXPECT_DOUBLE_EQ(kappa_minus(u, prior, err), 0.1);
}

TEST(KappaPlus, FullDiameterWindowIsOne) {
  Universe u = Universe::integer_range(0, 9);
  DiscretePrior prior = DiscretePrior::from_weights(
      {0.3, 0.1, 0.1, 0.1, 0.1, 0.1, 0.05, 0.05, 0.05, 0.05});
  ErrorModel err(ErrorKind::kAbsoluteDifference, 9.0);
  EXPECT_DOUBLE_EQ(kappa_plus(u, prior, err), 1.0);
  EXPECT_DOUBLE_EQ(kappa_minus(u, prior, err), 1.0);
}

TEST(KappaPlus, WindowCountOverIntegerRange) {
  Universe u = Universe::integer_range(0, 100);
  DiscretePrior prior = DiscretePrior::uniform(101);
  ErrorModel err(ErrorKind::kAbsoluteDifference, 10.0);
  // Interior centers cover 21 values; the edges only 11.
  EXPECT_NEAR(kappa_plus(u, prior, err), 21.0 / 101.0, 1e-15);
  EXPECT_NEAR(kappa_minus(u, prior, err), 11.0 / 101.0, 1e-15);
}

TEST(KappaMinus, PointMassWorstTarget) {
  Universe u = Universe::indexed(5);
  DiscretePrior prior = DiscretePrior::from_weights({0, 0, 1, 0, 0});
  ErrorModel err(ErrorKind::kExactMatch, 0.0);
  EXPECT_DOUBLE_EQ(kappa_minus(u, prior, err), 0.0);
}

TEST(Kappa, OrderAndMonotonicityInEta) {
  Universe u = Universe::integer_range(0, 30);
  Pcg32 rng(5);
  std::vector<double> w(31);
  for (auto& x : w) x = rng.u01() + 0.01;
  DiscretePrior prior = DiscretePrior::from_weights(w);
  double prev_plus = -1.0, prev_minus = -1.0;
  for (double eta : {0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0}) {
    ErrorModel err(ErrorKind::kAbsoluteDifference, eta);
    double kp = kappa_plus(u, prior, err);
    double km = kappa_minus(u, prior, err);
    EXPECT_LE(km, kp);
    EXPECT_GE(kp, prev_plus);
    EXPECT_GE(km, prev_minus);
    prev_plus = kp;
    prev_minus = km;
  }
}

TEST(Kappa, ExactMatchEtaZeroIsMinMaxWeight) {
  Universe u = Universe::indexed(6);
  DiscretePrior prior =
      DiscretePrior::from_weights({0.05, 0.3, 0.2, 0.25, 0.15, 0.05});
  ErrorModel err(ErrorKind::kExactMatch, 0.0);
  EXPECT_DOUBLE_EQ(kappa_plus(u, prior, err), 0.3);
  EXPECT_DOUBLE_EQ(kappa_minus(u, prior, err), 0.05);
}

TEST(ErrorModel, SelfErrorIsZeroAndSuccessSetContainsSelf) {
  Universe u = Universe::integer_range(0, 9);
  for (double eta : {0.0, 1.0, 5.0}) {
    ErrorModel exact(ErrorKind::kExactMatch, eta);
    ErrorModel metric(ErrorKind::kAbsoluteDifference, eta);
    for (RecordId z = 0; z < u.size(); ++z) {
      EXPECT_EQ(exact.error(u, z, z), 0.0);
      EXPECT_EQ(metric.error(u, z, z), 0.0);
      EXPECT_TRUE(exact.success(u, z, z));
      EXPECT_TRUE(metric.success(u, z, z));
    }
  }
}

TEST(ErrorModel, MetricWithoutEmbeddingIsConfigError) {
  Universe u = Universe::categorical({"a", "b", "c"});
  ErrorModel err(ErrorKind::kAbsoluteDifference, 1.0);
  EXPECT_THROW(err.check_compatible(u), ConfigError);
  EXPECT_THROW(kappa_plus(u, DiscretePrior::uniform(3), err), ConfigError);
}

TEST(EmpiricalPrior, CountsAndNormalization) {
  Universe u = Universe::categorical({"a", "b"});
  DiscretePrior prior = empirical_prior({"a", "a", "b"}, u);
  EXPECT_NEAR(prior.weight(0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(prior.weight(1), 1.0 / 3.0, 1e-15);
  EXPECT_TRUE(prior.from_exact_counts());
}

TEST(EmpiricalPrior, EmptyInput) {
  Universe u = Universe::categorical({"a", "b"});
  try {
    empirical_prior({}, u);
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_STREQ(e.what(), "empty input");
  }
}

TEST(EmpiricalPrior, RejectsOutOfUniverseListingRows) {
  Universe u = Universe::categorical({"a", "b"});
  try {
    empirical_prior({"a", "x", "b", "y"}, u);
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    ASSERT_EQ(e.rows().size(), 2u);
    EXPECT_EQ(e.rows()[0], 2u);
    EXPECT_EQ(e.rows()[1], 4u);
  }
}

TEST(EmpiricalPrior, LargeIngestSumsToOne) {
  Universe u = Universe::integer_range(0, 100);
  Pcg32 rng(9);
  std::vector<std::string> rows;
  rows.reserve(32561);
  for (int i = 0; i < 32561; ++i) {
    rows.push_back(std::to_string(rng.bounded(101)));
  }
  DiscretePrior prior = empirical_prior(rows, u);
  double sum = 0.0;
  for (double w : prior.weights()) sum += w;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(DiscretePrior, Validation) {
  EXPECT_THROW(DiscretePrior::from_weights({0.5, -0.1, 0.6}), ConfigError);
  EXPECT_THROW(DiscretePrior::from_weights({}), ConfigError);
  EXPECT_THROW(DiscretePrior::from_counts({0, 0}), ConfigError);
  DiscretePrior p = DiscretePrior::two_point(5, 0, 4);
  EXPECT_DOUBLE_EQ(p.weight(0), 0.5);
  EXPECT_DOUBLE_EQ(p.weight(4), 0.5);
  EXPECT_DOUBLE_EQ(p.weight(2), 0.0);
}

TEST(Universe, Validation) {
  EXPECT_THROW(Universe::categorical({"a"}), ConfigError);
  EXPECT_THROW(Universe::categorical({"a", "a"}), ConfigError);
  Universe u = Universe::integer_range(-2, 2);
  EXPECT_EQ(u.size(), 5u);
  EXPECT_EQ(u.id(0), "-2");
  EXPECT_DOUBLE_EQ(u.embedding(4), 2.0);
  EXPECT_EQ(u.index_of("0").value(), 2u);
  EXPECT_FALSE(u.index_of("9").has_value());
}

void expect_partition(const AuxMap& aux, std::size_t m) {
  std::set<RecordId> seen;
  for (std::size_t x = 0; x < aux.fiber_count(); ++x) {
    const auto& fiber = aux.fiber(static_cast<int>(x));
    EXPECT_FALSE(fiber.empty());
    for (RecordId z : fiber) {
      EXPECT_TRUE(seen.insert(z).second) << "fiber overlap at " << z;
      EXPECT_EQ(aux.value_of(z), static_cast<int>(x));
    }
  }
  EXPECT_EQ(seen.size(), m);
}

TEST(AuxMap, FibersPartitionTheUniverse) {
  Universe u = Universe::with_fields(
      {"color", "size"},
      {{"red", "s"}, {"red", "l"}, {"blue", "s"}, {"blue", "l"},
       {"green", "s"}});
  expect_partition(AuxMap::none(u), 5);
  expect_partition(AuxMap::full(u), 5);
  AuxMap attr = AuxMap::attribute(u, {"color"});
  expect_partition(attr, 5);
  EXPECT_EQ(attr.fiber_count(), 3u);

  AuxMap none = AuxMap::none(u);
  EXPECT_EQ(none.fiber_count(), 1u);
  EXPECT_EQ(none.fiber(0).size(), 5u);
  AuxMap full = AuxMap::full(u);
  EXPECT_EQ(full.fiber_count(), 5u);
  for (std::size_t x = 0; x < 5; ++x) EXPECT_EQ(full.fiber(x).size(), 1u);
}

TEST(AuxMap, AttributeNeedsSchema) {
  Universe u = Universe::indexed(4);
  EXPECT_THROW(AuxMap::attribute(u, {"color"}), ConfigError);
}

// Simpson integration with a power substitution that removes the endpoint
// singularities of beta densities with shape < 1.
double beta_mass_oracle(double alpha, double beta, double lo, double hi) {
  auto integrate = [&](double a, double b, auto&& f) {
    constexpr int kSteps = 20000;
    double h = (b - a) / kSteps;
    double acc = f(a) + f(b);
    for (int i = 1; i < kSteps; ++i) {
      acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    }
    return acc * h / 3.0;
  };
  double log_norm = std::lgamma(alpha) + std::lgamma(beta) -
                    std::lgamma(alpha + beta);
  double norm = std::exp(log_norm);
  // z = u^{1/alpha} on [0, 1/2]; z = 1 - v^{1/beta} on [1/2, 1]. The
  // substituted integrands are finite everywhere (that is the point of the
  // substitution), including at u = 0 where they equal 1/(shape * norm).
  auto left = [&](double u) {
    double z = std::pow(u, 1.0 / alpha);
    return std::pow(1.0 - z, beta - 1.0) / alpha / norm;
  };
  auto right = [&](double v) {
    double z = 1.0 - std::pow(v, 1.0 / beta);
    return std::pow(z, alpha - 1.0) / beta / norm;
  };
  auto cdf = [&](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (x <= 0.5) return integrate(0.0, std::pow(x, alpha), left);
    return 1.0 - integrate(0.0, std::pow(1.0 - x, beta), right);
  };
  return cdf(hi) - cdf(lo);
}

TEST(ContinuousPrior, UniformBasics) {
  ContinuousPrior p = ContinuousPrior::uniform(0.0, 1.0);
  EXPECT_DOUBLE_EQ(p.density(0.3), 1.0);
  EXPECT_DOUBLE_EQ(p.density(1.5), 0.0);
  EXPECT_DOUBLE_EQ(p.interval_mass(0.2, 0.5), 0.3);
  Pcg32 rng(3);
  for (int i = 0; i < 1000; ++i) {
    double z = p.sample(rng);
    EXPECT_GE(z, 0.0);
    EXPECT_LT(z, 1.0);
  }
}

TEST(ContinuousPrior, BetaDensityIntegratesToOne) {
  // Checked through the singularity-free substitution.
  EXPECT_NEAR(beta_mass_oracle(0.1, 0.1, 0.0, 1.0), 1.0, 1e-6);
  ContinuousPrior p = ContinuousPrior::beta(0.1, 0.1);
  EXPECT_NEAR(p.interval_mass(0.0, 1.0), 1.0, 1e-9);
}

TEST(ContinuousPrior, BetaIntervalMassMatchesOracle) {
  ContinuousPrior p = ContinuousPrior::beta(0.1, 0.1);
  for (auto [lo, hi] : std::vector<std::pair<double, double>>{
           {0.0, 0.1}, {0.1, 0.5}, {0.25, 0.75}, {0.9, 1.0}, {0.0, 0.5}}) {
    EXPECT_NEAR(p.interval_mass(lo, hi), beta_mass_oracle(0.1, 0.1, lo, hi),
                1e-6)
        << lo << ".." << hi;
  }
  ContinuousPrior q = ContinuousPrior::beta(2.0, 5.0);
  EXPECT_NEAR(q.interval_mass(0.1, 0.4), beta_mass_oracle(2.0, 5.0, 0.1, 0.4),
              1e-6);
}

TEST(ContinuousPrior, BetaSamplerMatchesMass) {
  ContinuousPrior p = ContinuousPrior::beta(0.1, 0.1);
  Pcg32 rng(13);
  constexpr int kDraws = 200000;
  int in = 0;
  for (int i = 0; i < kDraws; ++i) {
    double z = p.sample(rng);
    if (z >= 0.25 && z <= 0.75) ++in;
  }
  double expect = p.interval_mass(0.25, 0.75);
  double se = std::sqrt(expect * (1 - expect) / kDraws);
  EXPECT_NEAR(static_cast<double>(in) / kDraws, expect, 4.0 * se);
}

TEST(KappaPlusContinuous, UniformWindow) {
  ContinuousPrior p = ContinuousPrior::uniform(0.0, 1.0);
  EXPECT_NEAR(kappa_plus_continuous(p, 0.1), 0.2, 1e-9);
  EXPECT_NEAR(kappa_plus_continuous(p, 0.6), 1.0, 1e-9);
}

TEST(KappaPlusContinuous, BetaPeaksAtEndpoint) {
  ContinuousPrior p = ContinuousPrior::beta(0.1, 0.1);
  double k = kappa_plus_continuous(p, 0.1);
  // The best window hugs an endpoint, where the mass concentrates.
  EXPECT_NEAR(k, p.interval_mass(0.0, 0.2), 1e-6);
  EXPECT_GT(k, 0.4);
}

}  // namespace
}  // namespace radkit
