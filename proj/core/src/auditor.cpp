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

#include "radkit/auditor.hpp"

#include <cmath>

#include "json.hpp"
#include "radkit/bounds.hpp"
#include "radkit/errors.hpp"
#include "radkit/format.hpp"

namespace radkit {

namespace {

EpsEstimate defined(double v) {
  return {EpsEstimate::Status::kDefined, v};
}

EpsEstimate undefined() {
  return {EpsEstimate::Status::kUndefined, 0.0};
}

EpsEstimate saturated() {
  return {EpsEstimate::Status::kSaturated, kAuditEpsHi};
}

// Bisection inverse of an increasing bound on [kAuditEpsLo, kAuditEpsHi].
// Advantages beyond the bound's value at the cap saturate; bisection
// otherwise converges below the 1e-6 tolerance.
template <typename F>
EpsEstimate invert_increasing(F&& bound, double gamma_hat) {
  if (gamma_hat <= bound(kAuditEpsLo)) {
    // The measured advantage is consistent with (almost) no leakage; the
    // inversion lies below the search range and carries no useful budget.
    return undefined();
  }
  if (gamma_hat > bound(kAuditEpsHi)) return saturated();
  double lo = kAuditEpsLo, hi = kAuditEpsHi;
  for (int i = 0; i < 120; ++i) {
    double mid = 0.5 * (lo + hi);
    if (bound(mid) < gamma_hat) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-9) break;
  }
  return defined(0.5 * (lo + hi));
}

}  // namespace

EpsEstimate invert_blackbox(double gamma_hat, std::size_t m) {
  if (m < 2) throw ConfigError("universe size must be at least 2");
  double mm = static_cast<double>(m);
  if (!(gamma_hat > 0.0) || gamma_hat >= (mm - 1.0) / mm) return undefined();
  double value = std::log((gamma_hat * mm + 1.0) /
                          (1.0 - gamma_hat * mm / (mm - 1.0)));
  return defined(value);
}

EpsEstimate invert_mechanism_bound(MechanismKind kind, double gamma_hat,
                                   std::size_t m) {
  if (m < 2) throw ConfigError("universe size must be at least 2");
  double mm = static_cast<double>(m);
  switch (kind) {
    case MechanismKind::kGrr:
      return invert_blackbox(gamma_hat, m);
    case MechanismKind::kOue: {
      // The uniform bound saturates at (m - 1) / (2m) as eps grows.
      double asymptote = (mm - 1.0) / (2.0 * mm);
      if (!(gamma_hat > 0.0) || gamma_hat >= asymptote) return undefined();
      Universe u = Universe::indexed(m);
      DiscretePrior prior = DiscretePrior::uniform(m);
      ThreatModel threat{ErrorModel(ErrorKind::kExactMatch, 0.0),
                         AuxMap::none(u)};
      auto bound = [&](double eps) {
        OueMechanism oue(m, eps);
        return bound_closed_form(oue, u, prior, threat).value;
      };
      return invert_increasing(bound, gamma_hat);
    }
    case MechanismKind::kSs: {
      if (!(gamma_hat > 0.0) || gamma_hat >= (mm - 1.0) / mm) {
        return undefined();
      }
      Universe u = Universe::indexed(m);
      DiscretePrior prior = DiscretePrior::uniform(m);
      ThreatModel threat{ErrorModel(ErrorKind::kExactMatch, 0.0),
                         AuxMap::none(u)};
      auto bound = [&](double eps) {
        SsMechanism ss(m, eps);
        return bound_closed_form(ss, u, prior, threat).value;
      };
      // The omega plateaus make the bound piecewise; bisection against the
      // nondecreasing envelope still lands on inf{eps : bound >= gamma}.
      return invert_increasing(bound, gamma_hat);
    }
    default:
      throw ConfigError("no audit inversion for mechanism kind " +
                        to_string(kind));
  }
}

AuditReport audit(const MechanismSpec& spec, double claimed_eps,
                  std::size_t m, int repetitions, std::uint64_t budget,
                  std::uint64_t master_seed, int parallelism) {
  if (repetitions < 1) throw ConfigError("audit needs at least 1 repetition");
  if (budget < m) throw ConfigError("insufficient trials per target");
  if (spec.kind != MechanismKind::kGrr && spec.kind != MechanismKind::kOue &&
      spec.kind != MechanismKind::kSs) {
    throw ConfigError("auditing supports grr, oue and ss mechanisms");
  }

  Universe universe = Universe::indexed(m);
  DiscretePrior prior = DiscretePrior::uniform(m);
  ThreatModel threat{ErrorModel(ErrorKind::kExactMatch, 0.0),
                     AuxMap::none(universe)};
  MechanismSpec run_spec = spec;
  run_spec.m = m;
  run_spec.eps = claimed_eps;
  auto mech = make_mechanism(run_spec, universe);
  auto attack = make_optimal_attack(*mech, universe, prior, threat);

  AuditReport report;
  report.kind = spec.kind;
  report.claimed_eps = claimed_eps;
  report.m = m;
  report.repetitions = repetitions;
  report.budget = budget;
  report.trials_per_target = budget / m;
  report.master_seed = master_seed;

  EstimationPlan plan;
  plan.trials_per_target = budget / m;
  plan.parallelism = parallelism;
  plan.estimand = Estimand::kRad;
  for (int r = 0; r < repetitions; ++r) {
    plan.master_seed = child_seed(master_seed, static_cast<std::uint64_t>(r));
    EstimateResult est =
        estimate(plan, *mech, universe, prior, threat, *attack);
    AuditRow row;
    row.repetition = r;
    row.gamma_hat = est.gamma_hat;
    row.eps = invert_mechanism_bound(spec.kind, est.gamma_hat, m);
    report.rows.push_back(row);
  }

  double sum = 0.0;
  for (const auto& row : report.rows) {
    switch (row.eps.status) {
      case EpsEstimate::Status::kDefined:
        ++report.defined_count;
        sum += row.eps.value;
        break;
      case EpsEstimate::Status::kUndefined:
        ++report.undefined_count;
        break;
      case EpsEstimate::Status::kSaturated:
        ++report.saturated_count;
        break;
    }
  }
  if (report.defined_count > 0) {
    report.mean_eps = sum / report.defined_count;
    if (report.defined_count > 1) {
      double ss = 0.0;
      for (const auto& row : report.rows) {
        if (!row.eps.defined()) continue;
        double d = row.eps.value - report.mean_eps;
        ss += d * d;
      }
      report.std_eps = std::sqrt(ss / (report.defined_count - 1));
    }
  }
  return report;
}

namespace {

std::string eps_to_string(const EpsEstimate& eps) {
  switch (eps.status) {
    case EpsEstimate::Status::kDefined:
      return format_number(eps.value);
    case EpsEstimate::Status::kSaturated:
      return ">" + format_number(kAuditEpsHi);
    case EpsEstimate::Status::kUndefined:
      return "";
  }
  return "";
}

}  // namespace

std::string audit_to_csv(const AuditReport& report) {
  std::string out = "repetition,gamma_hat,eps_hat,defined\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.repetition);
    out += ',';
    out += format_number(row.gamma_hat);
    out += ',';
    out += eps_to_string(row.eps);
    out += ',';
    out += row.eps.defined() ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::string audit_to_json(const AuditReport& report) {
  nlohmann::json j;
  j["mechanism"] = to_string(report.kind);
  j["claimed_eps"] = report.claimed_eps;
  j["m"] = report.m;
  j["repetitions"] = report.repetitions;
  j["budget"] = report.budget;
  j["trials_per_target"] = report.trials_per_target;
  j["master_seed"] = report.master_seed;
  j["mean_eps"] = report.mean_eps;
  j["std_eps"] = report.std_eps;
  j["defined_count"] = report.defined_count;
  j["undefined_count"] = report.undefined_count;
  j["saturated_count"] = report.saturated_count;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    r["repetition"] = row.repetition;
    r["gamma_hat"] = row.gamma_hat;
    r["defined"] = row.eps.defined();
    if (row.eps.defined()) {
      r["eps_hat"] = row.eps.value;
    } else if (row.eps.status == EpsEstimate::Status::kSaturated) {
      r["eps_hat"] = ">" + format_number(kAuditEpsHi);
    } else {
      r["eps_hat"] = nullptr;
    }
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j.dump(2);
}

}  // namespace radkit
