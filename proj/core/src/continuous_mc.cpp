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

#include "radkit/continuous_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "radkit/errors.hpp"

namespace radkit {

namespace {

constexpr int kRootGrid = 256;
constexpr double kDedupeTol = 1e-12;

struct Region {
  double lo = 0.0;
  double hi = 0.0;
  // -1: g' depends on the left window edge only (sign flipped);
  //  0: both edges; +1: right edge only; 2: g' identically zero.
  int type = 0;
};

// Piecewise regions of x -> S_eta(x) on [0, 1].
std::vector<Region> make_regions(double eta) {
  // type +1: S = [0, x + eta]; type 0: S = [x - eta, x + eta];
  // type -1: S = [x - eta, 1]; type 2: S = [0, 1].
  std::vector<Region> regions;
  if (eta <= 0.5) {
    regions.push_back({0.0, eta, +1});
    regions.push_back({eta, 1.0 - eta, 0});
    regions.push_back({1.0 - eta, 1.0, -1});
  } else {
    regions.push_back({0.0, 1.0 - eta, +1});
    regions.push_back({1.0 - eta, eta, 2});
    regions.push_back({eta, 1.0, -1});
  }
  return regions;
}

// g'_theta(x) for a region type, given the window-edge contributions
// h(v) = (p(theta | v) - y) pi(v).
class DerivativeEval {
 public:
  DerivativeEval(const ExponentialMechanism1D& mech,
                 const ContinuousPrior& prior, double theta, double eta,
                 double y_hat)
      : mech_(mech), prior_(prior), theta_(theta), eta_(eta), y_(y_hat) {}

  double edge(double v) const {
    if (v < 0.0 || v > 1.0) return 0.0;
    return (mech_.density(theta_, v) - y_) * prior_.density(v);
  }

  double operator()(double x, int type) const {
    switch (type) {
      case +1:
        return edge(x + eta_);
      case -1:
        return -edge(x - eta_);
      case 0:
        return edge(x + eta_) - edge(x - eta_);
      default:
        return 0.0;
    }
  }

 private:
  const ExponentialMechanism1D& mech_;
  const ContinuousPrior& prior_;
  double theta_, eta_, y_;
};

void push_candidate(std::vector<double>& out, double x) {
  for (double v : out) {
    if (std::fabs(v - x) <= kDedupeTol) return;
  }
  out.push_back(x);
}

}  // namespace

std::vector<double> candidate_maximizers(const ExponentialMechanism1D& mech,
                                         const ContinuousPrior& prior,
                                         double theta, double eta,
                                         double y_hat) {
  if (eta < 0) throw std::domain_error("eta must be nonnegative");
  std::vector<double> out;
  if (eta >= 1.0) {
    // Full coverage: g is constant in x.
    out.push_back(0.0);
    return out;
  }
  DerivativeEval deriv(mech, prior, theta, eta, y_hat);
  std::vector<Region> regions = make_regions(eta);

  for (const Region& region : regions) {
    double len = region.hi - region.lo;
    if (len <= 0.0) {
      // Degenerate region (eta = 1/2): its single point is a candidate.
      push_candidate(out, region.lo);
      continue;
    }
    if (region.type == 2) {
      // g is constant here; one representative point carries its value.
      push_candidate(out, region.lo);
      continue;
    }
    double step = len / kRootGrid;
    double prev_x = region.lo + 1e-12 * len;
    double prev_d = deriv(prev_x, region.type);
    for (int i = 1; i <= kRootGrid; ++i) {
      double x = region.lo + step * i;
      if (i == kRootGrid) x = region.hi - 1e-12 * len;
      double d = deriv(x, region.type);
      if (prev_d > 0.0 && d <= 0.0) {
        // Descending sign change: bracket a local maximum and bisect.
        double lo = prev_x, hi = x;
        for (int it = 0; it < 60; ++it) {
          double mid = 0.5 * (lo + hi);
          if (deriv(mid, region.type) > 0.0) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        push_candidate(out, 0.5 * (lo + hi));
      }
      prev_x = x;
      prev_d = d;
    }
  }
  // Endpoints can host the maximum only when g does not increase into the
  // interior (left ends) or decrease out of them (right ends). Checking the
  // one-sided derivative signs keeps the candidate count at the analytic
  // k <= 4 level.
  auto region_at = [&](double x, bool from_left) -> const Region* {
    for (const Region& r : regions) {
      if (r.hi - r.lo <= 0.0 || r.type == 2) continue;
      if (from_left ? (x > r.lo && x <= r.hi) : (x >= r.lo && x < r.hi)) {
        return &r;
      }
    }
    return nullptr;
  };
  if (const Region* first = region_at(1e-12, false)) {
    if (deriv(1e-12, first->type) <= 0.0) push_candidate(out, 0.0);
  }
  if (const Region* last = region_at(1.0 - 1e-12, true)) {
    if (deriv(1.0 - 1e-12, last->type) >= 0.0) push_candidate(out, 1.0);
  }
  for (std::size_t r = 1; r < regions.size(); ++r) {
    double c = regions[r].lo;
    if (c <= 0.0 || c >= 1.0) continue;
    const Region* left = region_at(c - 1e-9, true);
    const Region* right = region_at(c + 1e-9, false);
    if (!left || !right) continue;
    double before = deriv(c - 1e-9, left->type);
    double after = deriv(c + 1e-9, right->type);
    if (before >= 0.0 && after <= 0.0) push_candidate(out, c);
  }
  if (out.empty()) out.push_back(0.0);
  return out;
}

namespace {

// Precomputed window-edge tables for the root grid: everything that does
// not depend on theta or y_hat (one exp and the prior density per grid
// point) is evaluated once per (mechanism, prior, eta) instead of once per
// outer sample. Candidate semantics match candidate_maximizers().
class CachedCandidateFinder {
 public:
  CachedCandidateFinder(const ExponentialMechanism1D& mech,
                        const ContinuousPrior& prior, double eta)
      : mech_(mech),
        prior_(prior),
        eta_(eta),
        s_(mech.scale()),
        exp_inv_s_(std::exp(-1.0 / s_)),
        regions_(make_regions(eta)) {
    for (const Region& region : regions_) {
      grids_.emplace_back();
      RegionGrid& grid = grids_.back();
      double len = region.hi - region.lo;
      if (len <= 0.0 || region.type == 2) continue;
      double step = len / kRootGrid;
      for (int i = 0; i <= kRootGrid; ++i) {
        double x = region.lo + step * i;
        if (i == 0) x = region.lo + 1e-12 * len;
        if (i == kRootGrid) x = region.hi - 1e-12 * len;
        grid.x.push_back(x);
        grid.plus.push_back(make_edge(x + eta_));
        grid.minus.push_back(make_edge(x - eta_));
      }
    }
  }

  void find(double theta, double y_hat, std::vector<double>& out) const {
    out.clear();
    if (eta_ >= 1.0) {
      out.push_back(0.0);
      return;
    }
    DerivativeEval exact(mech_, prior_, theta, eta_, y_hat);
    double e_theta = std::exp(theta / s_);
    double e_theta_inv = 1.0 / e_theta;
    for (std::size_t r = 0; r < regions_.size(); ++r) {
      const Region& region = regions_[r];
      double len = region.hi - region.lo;
      if (len <= 0.0 || region.type == 2) {
        if (len >= 0.0) push_candidate(out, region.lo);
        continue;
      }
      const RegionGrid& grid = grids_[r];
      double prev_x = grid.x[0];
      double prev_d = deriv_cached(grid, 0, region.type, theta, e_theta,
                                   e_theta_inv, y_hat);
      for (int i = 1; i <= kRootGrid; ++i) {
        double x = grid.x[i];
        double d = deriv_cached(grid, i, region.type, theta, e_theta,
                                e_theta_inv, y_hat);
        if (prev_d > 0.0 && d <= 0.0) {
          double lo = prev_x, hi = x;
          for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            if (exact(mid, region.type) > 0.0) {
              lo = mid;
            } else {
              hi = mid;
            }
          }
          push_candidate(out, 0.5 * (lo + hi));
        }
        prev_x = x;
        prev_d = d;
      }
    }
    auto region_at = [&](double x, bool from_left) -> const Region* {
      for (const Region& r : regions_) {
        if (r.hi - r.lo <= 0.0 || r.type == 2) continue;
        if (from_left ? (x > r.lo && x <= r.hi) : (x >= r.lo && x < r.hi)) {
          return &r;
        }
      }
      return nullptr;
    };
    if (const Region* first = region_at(1e-12, false)) {
      if (exact(1e-12, first->type) <= 0.0) push_candidate(out, 0.0);
    }
    if (const Region* last = region_at(1.0 - 1e-12, true)) {
      if (exact(1.0 - 1e-12, last->type) >= 0.0) push_candidate(out, 1.0);
    }
    for (std::size_t r = 1; r < regions_.size(); ++r) {
      double c = regions_[r].lo;
      if (c <= 0.0 || c >= 1.0) continue;
      const Region* left = region_at(c - 1e-9, true);
      const Region* right = region_at(c + 1e-9, false);
      if (!left || !right) continue;
      if (exact(c - 1e-9, left->type) >= 0.0 &&
          exact(c + 1e-9, right->type) <= 0.0) {
        push_candidate(out, c);
      }
    }
    if (out.empty()) out.push_back(0.0);
  }

 private:
  struct EdgePoint {
    double e_v = 0.0;       // e^{v / s}
    double inv_norm = 0.0;  // 1 / (s (2 - e^{-v/s} - e^{-(1-v)/s}))
    double pi = 0.0;        // prior density at v
    double v = 0.0;
    bool valid = false;
  };
  struct RegionGrid {
    std::vector<double> x;
    std::vector<EdgePoint> plus;
    std::vector<EdgePoint> minus;
  };

  EdgePoint make_edge(double v) const {
    EdgePoint e;
    if (v < 0.0 || v > 1.0) return e;
    e.valid = true;
    e.v = v;
    e.e_v = std::exp(v / s_);
    double norm = s_ * (2.0 - 1.0 / e.e_v - exp_inv_s_ * e.e_v);
    e.inv_norm = 1.0 / norm;
    e.pi = prior_.density(v);
    return e;
  }

  double edge_value(const EdgePoint& e, double theta, double e_theta,
                    double e_theta_inv, double y_hat) const {
    if (!e.valid) return 0.0;
    double kernel = e.v <= theta ? e.e_v * e_theta_inv : e_theta / e.e_v;
    return (kernel * e.inv_norm - y_hat) * e.pi;
  }

  double deriv_cached(const RegionGrid& grid, int i, int type, double theta,
                      double e_theta, double e_theta_inv,
                      double y_hat) const {
    switch (type) {
      case +1:
        return edge_value(grid.plus[i], theta, e_theta, e_theta_inv, y_hat);
      case -1:
        return -edge_value(grid.minus[i], theta, e_theta, e_theta_inv,
                           y_hat);
      case 0:
        return edge_value(grid.plus[i], theta, e_theta, e_theta_inv, y_hat) -
               edge_value(grid.minus[i], theta, e_theta, e_theta_inv, y_hat);
      default:
        return 0.0;
    }
  }

  const ExponentialMechanism1D& mech_;
  const ContinuousPrior& prior_;
  double eta_, s_, exp_inv_s_;
  std::vector<Region> regions_;
  std::vector<RegionGrid> grids_;
};

// One nested Monte Carlo repetition.
struct RepetitionResult {
  double estimate = 0.0;
  int max_candidates = 0;
};

RepetitionResult run_repetition(const NestedMcPlan& plan,
                                const ExponentialMechanism1D& mech,
                                const ContinuousPrior& prior,
                                const CachedCandidateFinder& finder,
                                std::uint64_t seed) {
  double s = mech.scale();
  double exp_inv_s = std::exp(-1.0 / s);
  double eta = plan.eta;
  RepetitionResult result;
  double acc = 0.0;

  std::vector<double> z_batch(plan.n_z);
  std::vector<double> p_batch(plan.n_z);
  std::vector<double> candidates;

  for (int i = 0; i < plan.n_theta; ++i) {
    Pcg32 rng = trial_stream(seed, 7, static_cast<std::uint64_t>(i), 0, 0);
    double theta = rng.u01();
    double e_theta = std::exp(theta / s);
    double e_theta_inv = 1.0 / e_theta;

    // p_M(theta | z) with one exp per sample: E = e^{z/s} gives both the
    // kernel and the normalizer s (2 - 1/E - e^{-1/s} E).
    auto density_at = [&](double z) {
      double e_z = std::exp(z / s);
      double norm = s * (2.0 - 1.0 / e_z - exp_inv_s * e_z);
      double kernel = z <= theta ? e_z * e_theta_inv : e_theta / e_z;
      return kernel / norm;
    };

    // Marginal estimate from n_p prior draws.
    double y_hat = 0.0;
    for (int j = 0; j < plan.n_p; ++j) {
      y_hat += density_at(prior.sample(rng));
    }
    y_hat /= plan.n_p;

    finder.find(theta, y_hat, candidates);
    result.max_candidates =
        std::max(result.max_candidates, static_cast<int>(candidates.size()));

    // One shared z batch across all candidates.
    for (int j = 0; j < plan.n_z; ++j) {
      double z = prior.sample(rng);
      z_batch[j] = z;
      p_batch[j] = density_at(z) - y_hat;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (double x : candidates) {
      double lo = x - eta, hi = x + eta;
      double g = 0.0;
      for (int j = 0; j < plan.n_z; ++j) {
        if (z_batch[j] >= lo && z_batch[j] <= hi) g += p_batch[j];
      }
      best = std::max(best, g / plan.n_z);
    }
    acc += best;
  }
  result.estimate = acc / plan.n_theta;  // (b - a) = 1
  return result;
}

}  // namespace

McEstimate nested_mc_bound(const NestedMcPlan& plan,
                           const ExponentialMechanism1D& mech,
                           const ContinuousPrior& prior) {
  if (plan.eta > 1.0) {
    throw std::domain_error("eta exceeds the domain width");
  }
  if (plan.n_theta < 1 || plan.n_z < 1 || plan.n_p < 1 ||
      plan.repetitions < 1) {
    throw ConfigError("all sample sizes and repetitions must be >= 1");
  }
  McEstimate mc;
  mc.density_cap = mech.density_cap();
  mc.kappa_plus = kappa_plus_continuous(prior, plan.eta);
  mc.repetition_estimates.resize(plan.repetitions);

  CachedCandidateFinder finder(mech, prior, plan.eta);
  int threads = plan.parallelism > 0
                    ? plan.parallelism
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(threads, 1);
  std::vector<int> max_candidates(plan.repetitions, 0);
  auto work = [&](int begin, int stride) {
    for (int r = begin; r < plan.repetitions; r += stride) {
      RepetitionResult rep = run_repetition(
          plan, mech, prior, finder,
          child_seed(plan.master_seed, static_cast<std::uint64_t>(r)));
      mc.repetition_estimates[r] = rep.estimate;
      max_candidates[r] = rep.max_candidates;
    }
  };
  if (threads == 1 || plan.repetitions == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }

  for (int k : max_candidates) {
    mc.candidate_count = std::max(mc.candidate_count, k);
  }
  double sum = 0.0;
  for (double v : mc.repetition_estimates) sum += v;
  mc.estimate = sum / plan.repetitions;

  std::vector<double> sorted = mc.repetition_estimates;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    double pos = q * (sorted.size() - 1);
    std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= sorted.size()) return sorted.back();
    double frac = pos - static_cast<double>(i);
    return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
  };
  mc.ci_low = quantile(0.025);
  mc.ci_high = quantile(0.975);
  return mc;
}

double mc_failure_bound(double t, int n_theta, int n_z, int n_p,
                        double density_cap, double kappa_plus, int k) {
  double M = density_cap;
  double scale = static_cast<double>(n_theta) / (2.0 * M * M);
  double term1 = 2.0 * std::exp(-scale * t * t / 9.0);

  double inner2 = t / 3.0 -
                  M / std::sqrt(static_cast<double>(n_z)) *
                      std::sqrt(2.0 * std::log(2.0 * std::max(k, 1)));
  double term2 = inner2 > 0.0 ? std::exp(-scale * inner2 * inner2) : 1.0;

  double inner3 = kappa_plus > 0.0
                      ? t / (3.0 * kappa_plus) -
                            M / (2.0 * std::sqrt(static_cast<double>(n_p)))
                      : std::numeric_limits<double>::infinity();
  double term3 = inner3 > 0.0
                     ? (std::isinf(inner3) ? 0.0
                                           : std::exp(-scale * inner3 * inner3))
                     : 1.0;
  return std::min(1.0, term1 + term2 + term3);
}

}  // namespace radkit
