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

#include "radkit/estimator.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "radkit/errors.hpp"

namespace radkit {

namespace {

constexpr std::uint64_t kTermSuccess = 1;     // target in the data
constexpr std::uint64_t kTermCorrection = 2;  // prior-resampled challenger

struct Cell {
  std::uint64_t term;
  RecordId input;  // record fed to the mechanism
  RecordId eval;   // record whose reconstruction is scored
};

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::uint64_t run_cell(const Cell& cell, std::uint64_t trials,
                       std::uint64_t master, const Mechanism& mech,
                       const Universe& universe, const ThreatModel& threat,
                       const Attack& attack) {
  int aux_value = threat.aux.value_of(cell.eval);
  const ErrorModel& err = threat.error;
  std::uint64_t successes = 0;
  Output theta;
  for (std::uint64_t j = 0; j < trials; ++j) {
    Pcg32 rng = trial_stream(master, cell.term, cell.input, cell.eval, j);
    mech.sample(cell.input, rng, theta);
    RecordId guess = attack.respond(theta, aux_value, rng);
    successes += err.success(universe, cell.eval, guess) ? 1 : 0;
  }
  return successes;
}

// Correction term with challenger draws shared across all targets in a
// fiber: one mechanism draw and one attack response per (input, fiber,
// trial), scored against every target in the fiber.
void run_correction_shortcut(const EstimationPlan& plan, const Mechanism& mech,
                             const Universe& universe,
                             const DiscretePrior& prior,
                             const ThreatModel& threat, const Attack& attack,
                             std::vector<std::uint64_t>& counts) {
  std::size_t m = universe.size();
  std::uint64_t trials = plan.trials_per_target;
  Output theta;
  for (RecordId z0 = 0; z0 < m; ++z0) {
    if (prior.weight(z0) == 0.0) continue;
    for (std::size_t x = 0; x < threat.aux.fiber_count(); ++x) {
      const auto& fiber = threat.aux.fiber(static_cast<int>(x));
      bool any = false;
      for (RecordId z1 : fiber) any = any || prior.weight(z1) > 0.0;
      if (!any) continue;
      for (std::uint64_t j = 0; j < trials; ++j) {
        Pcg32 rng = trial_stream(plan.master_seed, kTermCorrection + 2, z0,
                                 static_cast<RecordId>(x), j);
        mech.sample(z0, rng, theta);
        RecordId guess = attack.respond(theta, static_cast<int>(x), rng);
        for (RecordId z1 : fiber) {
          if (prior.weight(z1) == 0.0) continue;
          if (threat.error.success(universe, z1, guess)) {
            ++counts[static_cast<std::size_t>(z0) * m + z1];
          }
        }
      }
    }
  }
}

}  // namespace

EstimateResult estimate(const EstimationPlan& plan, const Mechanism& mech,
                        const Universe& universe, const DiscretePrior& prior,
                        const ThreatModel& threat, const Attack& attack) {
  if (plan.trials_per_target < 1) {
    throw ConfigError("estimation needs at least one trial per target");
  }
  if (mech.universe_size() != universe.size() ||
      prior.size() != universe.size()) {
    throw ConfigError("mechanism, universe and prior sizes disagree");
  }
  threat.error.check_compatible(universe);

  std::size_t m = universe.size();
  std::uint64_t trials = plan.trials_per_target;

  EstimateResult result;
  result.trials_per_target = trials;
  result.term1_counts.assign(m, 0);
  bool want_correction = plan.estimand == Estimand::kRad;
  if (want_correction) result.term2_counts.assign(m * m, 0);

  std::vector<Cell> cells;
  for (RecordId z = 0; z < m; ++z) {
    if (prior.weight(z) > 0.0) cells.push_back({kTermSuccess, z, z});
  }
  if (want_correction && !plan.correction_shortcut) {
    for (RecordId z0 = 0; z0 < m; ++z0) {
      if (prior.weight(z0) == 0.0) continue;
      for (RecordId z1 = 0; z1 < m; ++z1) {
        if (prior.weight(z1) > 0.0) cells.push_back({kTermCorrection, z0, z1});
      }
    }
  }

  int threads = resolve_threads(plan.parallelism);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= cells.size()) break;
      const Cell& cell = cells[i];
      std::uint64_t successes = run_cell(cell, trials, plan.master_seed, mech,
                                         universe, threat, attack);
      if (cell.term == kTermSuccess) {
        result.term1_counts[cell.input] = successes;
      } else {
        result.term2_counts[static_cast<std::size_t>(cell.input) * m +
                            cell.eval] = successes;
      }
    }
  };
  if (threads <= 1 || cells.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (want_correction && plan.correction_shortcut) {
    run_correction_shortcut(plan, mech, universe, prior, threat, attack,
                            result.term2_counts);
  }

  // Weights are applied exactly once, after all integer accumulation.
  long double term1 = 0.0L, var1 = 0.0L;
  std::uint64_t total = 0;
  for (RecordId z = 0; z < m; ++z) {
    double w = prior.weight(z);
    if (w == 0.0) continue;
    total += trials;
    double rate = static_cast<double>(result.term1_counts[z]) /
                  static_cast<double>(trials);
    term1 += static_cast<long double>(w) * rate;
    var1 += static_cast<long double>(w) * w * rate * (1.0 - rate) /
            static_cast<double>(trials);
  }
  long double term2 = 0.0L, var2 = 0.0L;
  if (want_correction) {
    for (RecordId z0 = 0; z0 < m; ++z0) {
      double w0 = prior.weight(z0);
      if (w0 == 0.0) continue;
      for (RecordId z1 = 0; z1 < m; ++z1) {
        double w1 = prior.weight(z1);
        if (w1 == 0.0) continue;
        total += trials;
        double rate = static_cast<double>(
                          result.term2_counts[
                              static_cast<std::size_t>(z0) * m + z1]) /
                      static_cast<double>(trials);
        double w = w0 * w1;
        term2 += static_cast<long double>(w) * rate;
        var2 += static_cast<long double>(w) * w * rate * (1.0 - rate) /
                static_cast<double>(trials);
      }
    }
  }

  result.term1 = static_cast<double>(term1);
  result.term2 = static_cast<double>(term2);
  result.gamma_hat = static_cast<double>(term1 - term2);
  result.std_error = std::sqrt(static_cast<double>(var1 + var2));
  result.total_trials = total;
  return result;
}

namespace {

// Shared enumeration core: success probability tables per output.
struct ExactTerms {
  double term1 = 0.0;
  double term2 = 0.0;
};

ExactTerms exact_terms(const Mechanism& mech, const Universe& universe,
                       const DiscretePrior& prior, const ThreatModel& threat,
                       const Attack& attack) {
  threat.error.check_compatible(universe);
  std::size_t m = universe.size();
  ExactTerms acc;
  std::vector<double> like(m);
  std::vector<double> succ(m);
  std::size_t fibers = threat.aux.fiber_count();
  std::vector<std::vector<std::pair<RecordId, double>>> dists(fibers);
  mech.enumerate_outputs([&](const Output& theta) {
    for (RecordId z = 0; z < m; ++z) like[z] = mech.likelihood(theta, z);
    // The response distribution depends on theta and the aux value only.
    for (std::size_t x = 0; x < fibers; ++x) {
      attack.response_distribution(theta, static_cast<int>(x), dists[x]);
    }
    for (RecordId z1 = 0; z1 < m; ++z1) {
      if (prior.weight(z1) == 0.0) {
        succ[z1] = 0.0;
        continue;
      }
      double s = 0.0;
      for (const auto& [r, p] : dists[threat.aux.value_of(z1)]) {
        if (threat.error.success(universe, z1, r)) s += p;
      }
      succ[z1] = s;
    }
    double in_mass = 0.0, out_mass = 0.0, succ_mass = 0.0;
    for (RecordId z = 0; z < m; ++z) {
      double w = prior.weight(z);
      if (w == 0.0) continue;
      in_mass += w * like[z] * succ[z];
      out_mass += w * like[z];
      succ_mass += w * succ[z];
    }
    acc.term1 += in_mass;
    acc.term2 += out_mass * succ_mass;
  });
  return acc;
}

}  // namespace

double exact_rad(const Mechanism& mech, const Universe& universe,
                 const DiscretePrior& prior, const ThreatModel& threat,
                 const Attack& attack) {
  ExactTerms t = exact_terms(mech, universe, prior, threat, attack);
  return t.term1 - t.term2;
}

double exact_rero(const Mechanism& mech, const Universe& universe,
                  const DiscretePrior& prior, const ThreatModel& threat,
                  const Attack& attack) {
  ExactTerms t = exact_terms(mech, universe, prior, threat, attack);
  return t.term1;
}

double exact_rad_for_table(const Mechanism& mech, const Universe& universe,
                           const DiscretePrior& prior,
                           const ThreatModel& threat,
                           const std::vector<RecordId>& responses) {
  threat.error.check_compatible(universe);
  std::size_t m = universe.size();
  double term1 = 0.0, term2 = 0.0;
  std::vector<double> like(m);
  std::size_t index = 0;
  mech.enumerate_outputs([&](const Output& theta) {
    if (index >= responses.size()) {
      throw ConfigError("attack table shorter than the output space");
    }
    RecordId guess = responses[index++];
    for (RecordId z = 0; z < m; ++z) like[z] = mech.likelihood(theta, z);
    double in_mass = 0.0, out_mass = 0.0, succ_mass = 0.0;
    for (RecordId z = 0; z < m; ++z) {
      double w = prior.weight(z);
      if (w == 0.0) continue;
      bool ok = threat.error.success(universe, z, guess);
      in_mass += w * like[z] * (ok ? 1.0 : 0.0);
      out_mass += w * like[z];
      succ_mass += w * (ok ? 1.0 : 0.0);
    }
    term1 += in_mass;
    term2 += out_mass * succ_mass;
  });
  if (index != responses.size()) {
    throw ConfigError("attack table longer than the output space");
  }
  return term1 - term2;
}

}  // namespace radkit
