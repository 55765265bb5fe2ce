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

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "radkit/auditor.hpp"
#include "radkit/bounds.hpp"
#include "radkit/continuous_mc.hpp"
#include "radkit/csv.hpp"
#include "radkit/errors.hpp"
#include "radkit/estimator.hpp"
#include "radkit/format.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success, 1 configuration error, 2 undefined or unreachable
// result, 3 audit comparison failure.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitUndefined = 2;
constexpr int kExitAuditFail = 3;

using nlohmann::json;
using namespace radkit;

//===----------------------------------------------------------------------===//
// Report rendering
//===----------------------------------------------------------------------===//

// A tabular report rendered as CSV (with '#' provenance comments) or JSON
// with identical numeric content.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  json extra = json::object();
};

std::string render_csv(const Report& report, const std::string& config_echo,
                       std::uint64_t seed) {
  std::string out;
  out += "# radkit " + std::string(kVersion) + "\n";
  out += "# config: " + config_echo + "\n";
  out += "# seed: " + std::to_string(seed) + "\n";
  for (std::size_t c = 0; c < report.columns.size(); ++c) {
    if (c) out += ',';
    out += report.columns[c];
  }
  out += '\n';
  for (const auto& row : report.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += row[c];
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const Report& report, const std::string& config_echo,
                        std::uint64_t seed) {
  json j;
  j["provenance"] = {{"version", kVersion},
                     {"config", config_echo},
                     {"seed", seed}};
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      r[report.columns[c]] = row[c];
    }
    rows.push_back(r);
  }
  j["rows"] = rows;
  if (!report.extra.empty()) j["extra"] = report.extra;
  return j.dump(2) + "\n";
}

void emit(const Report& report, const std::string& format,
          const std::string& out_path, const std::string& config_echo,
          std::uint64_t seed) {
  std::string text = format == "json" ? render_json(report, config_echo, seed)
                                      : render_csv(report, config_echo, seed);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ConfigError("cannot write output file: " + out_path);
    f << text;
  }
}

//===----------------------------------------------------------------------===//
// Shared configuration
//===----------------------------------------------------------------------===//

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

struct DomainOptions {
  std::size_t m = 0;
  std::string records;      // comma-separated identifiers
  std::string field_names;  // comma-separated schema for attribute aux
  std::string embedding;    // comma-separated numeric values
  std::string prior = "uniform";
  std::string aux = "none";
  std::string error = "exact";
  double eta = 0.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--m", m, "universe size (records 0..m-1 with embedding)");
    cmd->add_option("--records", records, "comma-separated record identifiers");
    cmd->add_option("--field-names", field_names,
                    "field schema; record ids are then '|'-joined tuples");
    cmd->add_option("--embedding", embedding,
                    "comma-separated numeric embedding per record");
    cmd->add_option("--prior", prior,
                    "uniform | weights:w1,w2,... | csv:PATH:COL | skewed");
    cmd->add_option("--aux", aux, "none | full | attr:f1,f2,...");
    cmd->add_option("--error", error, "exact | absdiff");
    cmd->add_option("--eta", eta, "success threshold");
  }

  Universe build_universe() const {
    if (!records.empty()) {
      auto ids = split(records, ',');
      if (!field_names.empty()) {
        auto names = split(field_names, ',');
        std::vector<std::vector<std::string>> rows;
        for (const auto& id : ids) rows.push_back(split(id, '|'));
        return Universe::with_fields(names, rows);
      }
      if (!embedding.empty()) {
        std::vector<double> emb;
        for (const auto& v : split(embedding, ',')) emb.push_back(std::stod(v));
        return Universe::categorical_embedded(ids, emb);
      }
      return Universe::categorical(ids);
    }
    if (m < 2) throw ConfigError("specify --m or --records");
    return Universe::indexed(m);
  }

  DiscretePrior build_prior(const Universe& u) const {
    if (prior == "uniform") return DiscretePrior::uniform(u.size());
    if (prior == "skewed") {
      return DiscretePrior::two_point(u.size(), 0,
                                      static_cast<RecordId>(u.size() - 1));
    }
    if (prior.rfind("weights:", 0) == 0) {
      std::vector<double> w;
      for (const auto& v : split(prior.substr(8), ',')) w.push_back(std::stod(v));
      if (w.size() != u.size()) {
        throw ConfigError("weights length does not match the universe");
      }
      return DiscretePrior::from_weights(std::move(w));
    }
    if (prior.rfind("csv:", 0) == 0) {
      auto parts = split(prior.substr(4), ':');
      if (parts.size() != 2) throw ConfigError("--prior csv:PATH:COLUMN");
      CsvColumnSpec spec;
      spec.column = parts[1];
      auto values = read_csv_column(parts[0], spec);
      return empirical_prior(values, u);
    }
    throw ConfigError("unknown prior spec: " + prior);
  }

  ThreatModel build_threat(const Universe& u) const {
    ErrorKind kind;
    if (error == "exact") {
      kind = ErrorKind::kExactMatch;
    } else if (error == "absdiff") {
      kind = ErrorKind::kAbsoluteDifference;
    } else {
      throw ConfigError("unknown error kind: " + error);
    }
    ErrorModel em(kind, eta);
    em.check_compatible(u);
    if (aux == "none") return {em, AuxMap::none(u)};
    if (aux == "full") return {em, AuxMap::full(u)};
    if (aux.rfind("attr:", 0) == 0) {
      return {em, AuxMap::attribute(u, split(aux.substr(5), ','))};
    }
    throw ConfigError("unknown aux mode: " + aux);
  }
};

struct MechanismOptions {
  std::string mech;
  double eps = -1.0;
  double delta = 0.0;
  double sigma = 0.0;
  double sensitivity = 1.0;
  std::string truncation;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--mech", mech, "grr | oue | ss | laplace | gaussian");
    cmd->add_option("--eps", eps, "privacy budget");
    cmd->add_option("--delta", delta, "DP failure probability");
    cmd->add_option("--sigma", sigma, "Gaussian noise scale");
    cmd->add_option("--sens", sensitivity, "query sensitivity");
    cmd->add_option("--trunc", truncation, "truncation interval lo:hi");
  }

  bool has_mechanism() const { return !mech.empty(); }

  MechanismSpec build_spec() const {
    MechanismSpec spec;
    if (mech == "grr") {
      spec.kind = MechanismKind::kGrr;
    } else if (mech == "oue") {
      spec.kind = MechanismKind::kOue;
    } else if (mech == "ss") {
      spec.kind = MechanismKind::kSs;
    } else if (mech == "laplace") {
      spec.kind = MechanismKind::kLaplace;
    } else if (mech == "gaussian") {
      spec.kind = MechanismKind::kGaussian;
    } else {
      throw ConfigError("unknown mechanism: " + mech);
    }
    spec.eps = eps;
    spec.delta = delta;
    spec.sigma = sigma;
    spec.sensitivity = sensitivity;
    if (!truncation.empty()) {
      auto parts = split(truncation, ':');
      if (parts.size() != 2) throw ConfigError("--trunc lo:hi");
      spec.truncation = {std::stod(parts[0]), std::stod(parts[1])};
    }
    return spec;
  }
};

// "start:stop:step" expanded by integer stepping to avoid drift.
std::vector<double> parse_grid(const std::string& grid) {
  auto parts = split(grid, ':');
  if (parts.size() != 3) throw ConfigError("grid must be start:stop:step");
  double start = std::stod(parts[0]);
  double stop = std::stod(parts[1]);
  double step = std::stod(parts[2]);
  if (!(step > 0) || stop < start) throw ConfigError("bad grid bounds");
  auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> values;
  for (long i = 0; i <= n; ++i) values.push_back(start + step * i);
  return values;
}

std::string echo_args(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

//===----------------------------------------------------------------------===//
// bound
//===----------------------------------------------------------------------===//

struct BoundRequest {
  DomainOptions domain;
  MechanismOptions mech;
  std::string eps_grid;
  std::string sources = "optimal";
  bool all_applicable = false;
};

// Evaluates one bound source; returns nullopt when the source does not
// apply to this configuration.
std::optional<double> eval_source(const std::string& source,
                                  const BoundRequest& req, double eps,
                                  const Universe& u, const DiscretePrior& prior,
                                  const ThreatModel& threat,
                                  const Mechanism* mech) {
  PriorStats stats = prior_stats(u, prior, threat.error);
  bool no_aux = threat.aux.mode() == AuxMode::kNone;
  bool eta0 = threat.error.kind() == ErrorKind::kExactMatch
                  ? threat.error.eta() < 1.0
                  : threat.error.eta() == 0.0;
  // Sources parameterized by (eps, delta) need an epsilon; sigma-only
  // mechanisms (Gaussian) expose their own trade-off instead.
  bool has_eps = eps >= 0.0;
  if (!has_eps && source != "optimal" && source != "optimal-enumerated" &&
      source != "optimal-closed-form" && source != "worst-case-tv" &&
      source != "fdp" && source != "rero-fdp") {
    return std::nullopt;
  }
  if (!has_eps && !mech &&
      (source == "fdp" || source == "rero-fdp" || source == "worst-case-tv")) {
    return std::nullopt;
  }
  if (source == "worst-case-tv") {
    if (mech) return bound_worst_case(*mech, prior).value;
    return bound_worst_case_eps_delta(eps, req.mech.delta, stats.kappa_pi)
        .value;
  }
  if (source == "optimal" || source == "optimal-closed-form" ||
      source == "optimal-enumerated") {
    if (!mech) return std::nullopt;
    if (source != "optimal-enumerated") {
      try {
        return bound_closed_form(*mech, u, prior, threat).value;
      } catch (const ConfigError&) {
        if (source == "optimal-closed-form") return std::nullopt;
      }
    }
    try {
      return bound_optimal_enumerated(*mech, u, prior, threat).value;
    } catch (const CapacityError&) {
      return std::nullopt;
    }
  }
  if (source == "fdp") {
    if (!no_aux) return std::nullopt;
    Tradeoff tf = mech ? mech->tradeoff() : Tradeoff::eps_delta(eps, req.mech.delta);
    return bound_fdp(tf, stats, true, threat.error.eta()).value;
  }
  if (source == "eps-delta") {
    if (!no_aux) return std::nullopt;
    return bound_epsdelta(eps, req.mech.delta, stats, threat.error.eta())
        .value;
  }
  if (source == "perfect-reco") {
    if (!no_aux || !eta0) return std::nullopt;
    return bound_perfect_reco_bb(eps, req.mech.delta, prior).value;
  }
  if (source == "uniform-blackbox") {
    if (!no_aux || !eta0 || !prior.is_uniform()) return std::nullopt;
    return bound_uniform_bb(eps, req.mech.delta, u.size()).value;
  }
  if (source == "rero-pure-dp") {
    return bound_rero_pure_dp(eps, stats.kappa_plus);
  }
  if (source == "rero-fdp") {
    Tradeoff tf = mech ? mech->tradeoff() : Tradeoff::eps_delta(eps, req.mech.delta);
    return bound_rero_fdp(tf, stats.kappa_plus);
  }
  throw ConfigError("unknown bound source: " + source);
}

int cmd_bound(BoundRequest& req, const std::string& format,
              const std::string& out, const std::string& echo,
              std::uint64_t seed) {
  Universe u = req.domain.build_universe();
  DiscretePrior prior = req.domain.build_prior(u);
  ThreatModel threat = req.domain.build_threat(u);

  std::vector<double> grid;
  if (!req.eps_grid.empty()) {
    grid = parse_grid(req.eps_grid);
  } else {
    if (req.mech.eps < 0 && req.mech.mech != "gaussian") {
      throw ConfigError("specify --eps or --eps-grid");
    }
    grid.push_back(req.mech.eps);
  }
  std::vector<std::string> sources;
  if (req.all_applicable) {
    sources = {"optimal",        "worst-case-tv", "fdp",
               "eps-delta",      "perfect-reco",  "uniform-blackbox",
               "rero-pure-dp",   "rero-fdp"};
  } else {
    sources = split(req.sources, ',');
  }

  Report report;
  report.columns = {"eps", "source", "value", "aux", "eta"};
  std::string aux_label = req.domain.aux;
  for (double eps : grid) {
    MechanismOptions mo = req.mech;
    mo.eps = eps;
    std::unique_ptr<Mechanism> mech;
    if (mo.has_mechanism()) mech = make_mechanism(mo.build_spec(), u);
    bool any = false;
    for (const auto& source : sources) {
      auto value = eval_source(source, req, eps, u, prior, threat, mech.get());
      if (!value) {
        if (!req.all_applicable && sources.size() == 1) {
          throw ConfigError("bound source '" + source +
                            "' does not apply to this configuration (aux=" +
                            aux_label + ", eta=" +
                            format_number(req.domain.eta) + ")");
        }
        continue;
      }
      any = true;
      report.rows.push_back({format_number(eps), source, format_number(*value),
                             aux_label, format_number(req.domain.eta)});
    }
    if (!any) {
      throw ConfigError("no requested bound applies to this configuration");
    }
  }
  emit(report, format, out, echo, seed);
  return kExitOk;
}

//===----------------------------------------------------------------------===//
// calibrate
//===----------------------------------------------------------------------===//

struct CalibrateRequest {
  std::string mech;
  std::size_t m = 0;
  double risk = 0.0;
  int steps = 1;
  double delta = 0.0;
};

int cmd_calibrate(CalibrateRequest& req, const std::string& format,
                  const std::string& out, const std::string& echo,
                  std::uint64_t seed) {
  if (req.m < 2) throw ConfigError("--m must be at least 2");
  std::string parameter = "eps";
  double value = 0.0;
  double achieved = 0.0;
  Universe u = Universe::indexed(req.m);
  DiscretePrior prior = DiscretePrior::uniform(req.m);
  ThreatModel threat{ErrorModel(ErrorKind::kExactMatch, 0.0), AuxMap::none(u)};
  if (req.mech == "grr") {
    value = calibrate_grr_epsilon(req.risk, req.m, kappa_pi(prior));
    GrrMechanism mech(req.m, value);
    achieved = bound_closed_form(mech, u, prior, threat).value;
  } else if (req.mech == "oue") {
    value = calibrate_oue_epsilon(req.risk, req.m);
    OueMechanism mech(req.m, value);
    achieved = bound_closed_form(mech, u, prior, threat).value;
  } else if (req.mech == "ss") {
    value = calibrate_ss_epsilon(req.risk, req.m);
    SsMechanism mech(req.m, value);
    achieved = bound_closed_form(mech, u, prior, threat).value;
  } else if (req.mech == "laplace") {
    value = calibrate_laplace_epsilon(req.risk, req.m);
    LaplaceMechanism mech(u.embedding(), value, 1.0, std::nullopt);
    achieved = bound_closed_form(mech, u, prior, threat).value;
  } else if (req.mech == "gaussian") {
    parameter = "sigma";
    value = calibrate_gaussian_sigma(req.risk, req.m);
    GaussianMechanism mech(u.embedding(), value, 1.0);
    achieved = bound_closed_form(mech, u, prior, threat).value;
  } else if (req.mech == "gdp-sgd") {
    parameter = "sigma";
    value = calibrate_gdp_sigma(req.risk, req.m, req.steps);
    achieved = gdp_advantage_bound(value, req.m, req.steps);
  } else if (req.mech == "blackbox") {
    value = calibrate_blackbox_epsilon(req.risk, req.m, req.delta);
    achieved = bound_uniform_bb(value, req.delta, req.m).value;
  } else {
    throw ConfigError("unknown calibration target: " + req.mech);
  }

  Report report;
  report.columns = {"mechanism", "m", "target_risk", "parameter", "value",
                    "achieved_risk"};
  report.rows.push_back({req.mech, std::to_string(req.m),
                         format_number(req.risk), parameter,
                         format_number(value), format_number(achieved)});
  emit(report, format, out, echo, seed);
  return kExitOk;
}

//===----------------------------------------------------------------------===//
// attack / compare
//===----------------------------------------------------------------------===//

struct AttackRequest {
  DomainOptions domain;
  MechanismOptions mech;
  std::string attack = "optimal";
  std::string estimand = "rad";
  std::uint64_t trials = 1000;
  std::uint64_t budget = 0;
  bool correction_shortcut = false;
  int threads = 0;
};

std::unique_ptr<Attack> build_attack(const std::string& name,
                                     const Mechanism& mech, const Universe& u,
                                     const DiscretePrior& prior,
                                     const ThreatModel& threat) {
  if (name == "optimal") return make_optimal_attack(mech, u, prior, threat);
  if (name == "oblivious") {
    return std::make_unique<ObliviousPriorAttack>(u, prior, threat);
  }
  throw ConfigError("unknown attack: " + name);
}

std::string bound_label_for(const Mechanism& mech, const Universe& u,
                            const DiscretePrior& prior,
                            const ThreatModel& threat, double* value) {
  try {
    *value = bound_closed_form(mech, u, prior, threat).value;
    return "optimal-closed-form";
  } catch (const ConfigError&) {
  }
  try {
    *value = bound_optimal_enumerated(mech, u, prior, threat).value;
    return "optimal-enumerated";
  } catch (const CapacityError&) {
  }
  *value = bound_worst_case(mech, prior).value;
  return "worst-case-tv";
}

int cmd_attack(AttackRequest& req, bool compare_mode, const std::string& format,
               const std::string& out, const std::string& echo,
               std::uint64_t seed) {
  Universe u = req.domain.build_universe();
  DiscretePrior prior = req.domain.build_prior(u);
  ThreatModel threat = req.domain.build_threat(u);
  auto mech = make_mechanism(req.mech.build_spec(), u);
  auto attack = build_attack(req.attack, *mech, u, prior, threat);

  EstimationPlan plan;
  plan.trials_per_target =
      req.budget > 0 ? std::max<std::uint64_t>(1, req.budget / u.size())
                     : req.trials;
  plan.master_seed = seed;
  plan.parallelism = req.threads;
  plan.correction_shortcut = req.correction_shortcut;

  double bound_value = 0.0;
  std::string bound_source =
      bound_label_for(*mech, u, prior, threat, &bound_value);

  Report report;
  report.columns = {"estimand",  "attack",       "gamma_hat", "std_error",
                    "term1",     "term2",        "trials_per_target",
                    "total_trials", "bound_source", "bound_value"};
  auto run = [&](Estimand estimand, const char* name) {
    plan.estimand = estimand;
    EstimateResult est = estimate(plan, *mech, u, prior, threat, *attack);
    report.rows.push_back(
        {name, req.attack, format_number(est.gamma_hat),
         format_number(est.std_error), format_number(est.term1),
         format_number(est.term2), std::to_string(est.trials_per_target),
         std::to_string(est.total_trials), bound_source,
         format_number(bound_value)});
  };
  if (compare_mode) {
    run(Estimand::kRad, "rad");
    run(Estimand::kRero, "rero");
  } else if (req.estimand == "rero") {
    run(Estimand::kRero, "rero");
  } else {
    run(Estimand::kRad, "rad");
  }
  emit(report, format, out, echo, seed);
  return kExitOk;
}

//===----------------------------------------------------------------------===//
// audit
//===----------------------------------------------------------------------===//

struct AuditRequest {
  std::string mech;
  std::size_t m = 0;
  double claimed_eps = -1.0;
  int repetitions = 5;
  std::uint64_t budget = 1000000;
  int threads = 0;
  double compare_threshold = -1.0;  // >= 0 switches compare mode on
};

int cmd_audit(AuditRequest& req, const std::string& format,
              const std::string& out, const std::string& echo,
              std::uint64_t seed) {
  MechanismOptions mo;
  mo.mech = req.mech;
  mo.eps = req.claimed_eps;
  MechanismSpec spec = mo.build_spec();
  AuditReport audit_report = audit(spec, req.claimed_eps, req.m,
                                   req.repetitions, req.budget, seed,
                                   req.threads);

  Report report;
  report.columns = {"repetition", "gamma_hat", "eps_hat", "defined"};
  for (const auto& row : audit_report.rows) {
    std::string eps_hat;
    if (row.eps.defined()) {
      eps_hat = format_number(row.eps.value);
    } else if (row.eps.status == EpsEstimate::Status::kSaturated) {
      eps_hat = ">" + format_number(kAuditEpsHi);
    }
    report.rows.push_back({std::to_string(row.repetition),
                           format_number(row.gamma_hat), eps_hat,
                           row.eps.defined() ? "true" : "false"});
  }
  report.extra["mechanism"] = to_string(audit_report.kind);
  report.extra["claimed_eps"] = audit_report.claimed_eps;
  report.extra["m"] = audit_report.m;
  report.extra["mean_eps"] = audit_report.mean_eps;
  report.extra["std_eps"] = audit_report.std_eps;
  report.extra["defined_count"] = audit_report.defined_count;
  report.extra["undefined_count"] = audit_report.undefined_count;
  report.extra["saturated_count"] = audit_report.saturated_count;
  report.extra["trials_per_target"] = audit_report.trials_per_target;

  bool fail = false;
  if (req.compare_threshold >= 0.0) {
    fail = audit_report.defined_count == 0 ||
           std::fabs(audit_report.mean_eps - req.claimed_eps) >
               req.compare_threshold;
    report.extra["compare_threshold"] = req.compare_threshold;
    report.extra["compare_result"] = fail ? "FAIL" : "PASS";
  }
  emit(report, format, out, echo, seed);
  if (req.compare_threshold >= 0.0 && fail) {
    std::cerr << "audit FAIL: |mean eps_hat - claimed| exceeds threshold\n";
    return kExitAuditFail;
  }
  return kExitOk;
}

//===----------------------------------------------------------------------===//
// mc
//===----------------------------------------------------------------------===//

struct McRequest {
  double eps = 1.0;
  std::string prior = "uniform";
  double eta = 0.1;
  int n = 500;
  int n_theta = 0, n_z = 0, n_p = 0;
  int repetitions = 500;
  int threads = 0;
  double t = -1.0;  // optional failure-bound evaluation point
};

int cmd_mc(McRequest& req, const std::string& format, const std::string& out,
           const std::string& echo, std::uint64_t seed) {
  ContinuousPrior prior = ContinuousPrior::uniform(0.0, 1.0);
  if (req.prior.rfind("beta:", 0) == 0) {
    auto parts = split(req.prior.substr(5), ':');
    if (parts.size() != 2) throw ConfigError("--prior beta:alpha:beta");
    prior = ContinuousPrior::beta(std::stod(parts[0]), std::stod(parts[1]));
  } else if (req.prior != "uniform") {
    throw ConfigError("mc supports uniform and beta:a:b priors");
  }
  ExponentialMechanism1D mech(req.eps);
  NestedMcPlan plan;
  plan.n_theta = req.n_theta > 0 ? req.n_theta : req.n;
  plan.n_z = req.n_z > 0 ? req.n_z : req.n;
  plan.n_p = req.n_p > 0 ? req.n_p : req.n;
  plan.repetitions = req.repetitions;
  plan.master_seed = seed;
  plan.eta = req.eta;
  plan.parallelism = req.threads;
  McEstimate mc = nested_mc_bound(plan, mech, prior);

  Report report;
  report.columns = {"epsilon", "eta", "N", "estimate", "ci_low", "ci_high"};
  report.rows.push_back({format_number(req.eps), format_number(req.eta),
                         std::to_string(plan.n_theta),
                         format_number(mc.estimate), format_number(mc.ci_low),
                         format_number(mc.ci_high)});
  report.extra["density_cap"] = mc.density_cap;
  report.extra["kappa_plus"] = mc.kappa_plus;
  report.extra["candidate_count"] = mc.candidate_count;
  report.extra["repetitions"] = plan.repetitions;
  if (req.t > 0.0) {
    report.extra["failure_bound_t"] = req.t;
    report.extra["failure_bound"] =
        mc_failure_bound(req.t, plan.n_theta, plan.n_z, plan.n_p,
                         mc.density_cap, mc.kappa_plus,
                         std::max(mc.candidate_count, 1));
  }
  emit(report, format, out, echo, seed);
  return kExitOk;
}

//===----------------------------------------------------------------------===//
// prior-fit
//===----------------------------------------------------------------------===//

struct PriorFitRequest {
  DomainOptions domain;
  std::string csv_path;
  std::string column;
  bool no_header = false;
};

int cmd_prior_fit(PriorFitRequest& req, const std::string& format,
                  const std::string& out, const std::string& echo,
                  std::uint64_t seed) {
  Universe u = req.domain.build_universe();
  CsvColumnSpec spec;
  spec.column = req.column;
  spec.has_header = !req.no_header;
  auto values = read_csv_column(req.csv_path, spec);
  DiscretePrior prior = empirical_prior(values, u);

  Report report;
  report.columns = {"record", "weight"};
  for (RecordId z = 0; z < u.size(); ++z) {
    report.rows.push_back({u.id(z), format_number(prior.weight(z))});
  }
  report.extra["rows_read"] = values.size();
  report.extra["kappa_pi"] = kappa_pi(prior);
  ErrorModel em(req.domain.error == "absdiff" ? ErrorKind::kAbsoluteDifference
                                              : ErrorKind::kExactMatch,
                req.domain.eta);
  em.check_compatible(u);
  report.extra["kappa_plus"] = kappa_plus(u, prior, em);
  report.extra["kappa_minus"] = kappa_minus(u, prior, em);
  emit(report, format, out, echo, seed);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radkit: reconstruction-risk bounds, calibration, attack "
               "simulation and auditing for differentially private "
               "mechanisms"};
  app.require_subcommand(1);
  // Let --seed/--format/--out appear after the subcommand as well.
  app.fallthrough();

  std::string format = "csv";
  std::string out_path;
  std::uint64_t seed = 0;
  app.add_option("--format", format, "csv | json")->capture_default_str();
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--seed", seed, "master seed")->capture_default_str();

  BoundRequest bound_req;
  auto* bound_cmd = app.add_subcommand("bound", "evaluate risk bounds");
  bound_req.domain.add_to(bound_cmd);
  bound_req.mech.add_to(bound_cmd);
  bound_cmd->add_option("--eps-grid", bound_req.eps_grid,
                        "epsilon grid start:stop:step");
  bound_cmd->add_option("--source", bound_req.sources,
                        "comma list: optimal | optimal-enumerated | "
                        "optimal-closed-form | worst-case-tv | fdp | "
                        "eps-delta | perfect-reco | uniform-blackbox | "
                        "rero-pure-dp | rero-fdp");
  bound_cmd->add_flag("--all-applicable", bound_req.all_applicable,
                      "emit every bound that applies");

  CalibrateRequest cal_req;
  auto* cal_cmd =
      app.add_subcommand("calibrate", "solve noise for a target risk");
  cal_cmd->add_option("--mech", cal_req.mech,
                      "grr | oue | ss | laplace | gaussian | gdp-sgd | "
                      "blackbox")
      ->required();
  cal_cmd->add_option("--m", cal_req.m, "universe size")->required();
  cal_cmd->add_option("--risk", cal_req.risk, "target advantage")->required();
  cal_cmd->add_option("--steps", cal_req.steps, "composition steps (gdp-sgd)");
  cal_cmd->add_option("--delta", cal_req.delta, "delta (blackbox)");

  AttackRequest attack_req;
  auto* attack_cmd =
      app.add_subcommand("attack", "simulate an attack and estimate risk");
  attack_req.domain.add_to(attack_cmd);
  attack_req.mech.add_to(attack_cmd);
  attack_cmd->add_option("--attack", attack_req.attack,
                         "optimal | oblivious");
  attack_cmd->add_option("--estimand", attack_req.estimand, "rad | rero");
  attack_cmd->add_option("--trials", attack_req.trials, "trials per target");
  attack_cmd->add_option("--budget", attack_req.budget,
                         "total trial budget (overrides --trials)");
  attack_cmd->add_flag("--correction-shortcut",
                       attack_req.correction_shortcut,
                       "reuse challenger draws across same-fiber targets");
  attack_cmd->add_option("--threads", attack_req.threads, "worker threads");

  AttackRequest compare_req;
  auto* compare_cmd = app.add_subcommand(
      "compare", "estimate advantage and raw success side by side");
  compare_req.domain.add_to(compare_cmd);
  compare_req.mech.add_to(compare_cmd);
  compare_cmd->add_option("--attack", compare_req.attack,
                          "optimal | oblivious");
  compare_cmd->add_option("--estimand", compare_req.estimand,
                          "ignored; both are computed");
  compare_cmd->add_option("--trials", compare_req.trials, "trials per target");
  compare_cmd->add_option("--budget", compare_req.budget,
                          "total trial budget (overrides --trials)");
  compare_cmd->add_flag("--correction-shortcut",
                        compare_req.correction_shortcut,
                        "reuse challenger draws across same-fiber targets");
  compare_cmd->add_option("--threads", compare_req.threads, "worker threads");

  AuditRequest audit_req;
  auto* audit_cmd =
      app.add_subcommand("audit", "estimate the empirical privacy budget");
  audit_cmd->add_option("--mech", audit_req.mech, "grr | oue | ss")
      ->required();
  audit_cmd->add_option("--m", audit_req.m, "universe size")->required();
  audit_cmd->add_option("--claimed-eps", audit_req.claimed_eps,
                        "epsilon the mechanism claims")
      ->required();
  audit_cmd->add_option("--reps", audit_req.repetitions, "repetitions")
      ->capture_default_str();
  audit_cmd->add_option("--budget", audit_req.budget, "total trials per run")
      ->capture_default_str();
  audit_cmd->add_option("--threads", audit_req.threads, "worker threads");
  audit_cmd->add_option("--compare-threshold", audit_req.compare_threshold,
                        "flag FAIL when |mean eps_hat - claimed| exceeds "
                        "this");

  McRequest mc_req;
  auto* mc_cmd = app.add_subcommand(
      "mc", "nested Monte Carlo bound for the continuous mechanism");
  mc_cmd->add_option("--eps", mc_req.eps, "privacy budget")->required();
  mc_cmd->add_option("--prior", mc_req.prior, "uniform | beta:a:b");
  mc_cmd->add_option("--eta", mc_req.eta, "success threshold");
  mc_cmd->add_option("--n", mc_req.n, "N for n-theta = n-z = n-p");
  mc_cmd->add_option("--n-theta", mc_req.n_theta, "outer samples");
  mc_cmd->add_option("--n-z", mc_req.n_z, "success-set samples");
  mc_cmd->add_option("--n-p", mc_req.n_p, "marginal samples");
  mc_cmd->add_option("--reps", mc_req.repetitions, "repetitions")
      ->capture_default_str();
  mc_cmd->add_option("--threads", mc_req.threads, "worker threads");
  mc_cmd->add_option("--t", mc_req.t, "evaluate the failure bound at t");

  PriorFitRequest fit_req;
  auto* fit_cmd =
      app.add_subcommand("prior-fit", "estimate a prior from a CSV column");
  fit_req.domain.add_to(fit_cmd);
  fit_cmd->add_option("--csv", fit_req.csv_path, "input file")->required();
  fit_cmd->add_option("--column", fit_req.column, "column name or index")
      ->required();
  fit_cmd->add_flag("--no-header", fit_req.no_header,
                    "file has no header row");

  CLI11_PARSE(app, argc, argv);
  std::string echo = echo_args(argc, argv);

  try {
    if (bound_cmd->parsed()) {
      return cmd_bound(bound_req, format, out_path, echo, seed);
    }
    if (cal_cmd->parsed()) {
      return cmd_calibrate(cal_req, format, out_path, echo, seed);
    }
    if (attack_cmd->parsed()) {
      return cmd_attack(attack_req, false, format, out_path, echo, seed);
    }
    if (compare_cmd->parsed()) {
      return cmd_attack(compare_req, true, format, out_path, echo, seed);
    }
    if (audit_cmd->parsed()) {
      return cmd_audit(audit_req, format, out_path, echo, seed);
    }
    if (mc_cmd->parsed()) {
      return cmd_mc(mc_req, format, out_path, echo, seed);
    }
    if (fit_cmd->parsed()) {
      return cmd_prior_fit(fit_req, format, out_path, echo, seed);
    }
  } catch (const UnreachableRiskError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUndefined;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IngestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUndefined;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
