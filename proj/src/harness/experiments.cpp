#include "wsl/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wsl/harness/parallel.hpp"
#include "wsl/harness/trace_json.hpp"
#include "wsl/walksat.hpp"

namespace wsl::experiments {

using trace_json::Json;

void ExperimentConfig::validate() const {
  if (k < 1)
    throw ConfigError("--k must be at least 1");
  if (n < 1)
    throw ConfigError("--n must be at least 1");
  if (trials < 1)
    throw ConfigError("--trials must be at least 1");
  if (!r.empty() && !rho.empty())
    throw ConfigError("give either --r or --rho, not both");
  for (double d : densities())
    if (!(d > 0.0) || !std::isfinite(d))
      throw ConfigError("densities must be positive");
  if (!(lazy_bias > 0.0))
    throw ConfigError("--lazy-bias must be positive");
  if (!format.empty() && format != "csv" && format != "json")
    throw ConfigError("--format must be csv or json");
}

std::vector<double> ExperimentConfig::densities() const {
  if (!r.empty())
    return r;
  std::vector<double> out;
  for (double p : rho.empty() ? std::vector<double>{kRho0} : rho)
    out.push_back(r_from_rho(p, k));
  return out;
}

double r_from_rho(double rho, std::size_t k) {
  return rho * std::ldexp(1.0, static_cast<int>(k)) / static_cast<double>(k);
}

double rho_from_r(double r, std::size_t k) {
  return r * static_cast<double>(k) / std::ldexp(1.0, static_cast<int>(k));
}

pi::ProcessParams make_params(const ParamOverrides &o, std::size_t k, std::size_t n) {
  auto p = pi::ProcessParams::defaults(k, n);
  if (o.theta)
    p.set_theta(*o.theta, n);
  if (o.k1)
    p.k1 = *o.k1;
  if (o.k2)
    p.k2 = *o.k2;
  if (o.k3)
    p.k3 = *o.k3;
  if (o.lambda)
    p.lambda = *o.lambda;
  if (o.epsilon)
    p.epsilon = *o.epsilon;
  if (o.rich_fraction)
    p.rich_fraction = *o.rich_fraction;
  if (o.match_fraction)
    p.match_fraction = *o.match_fraction;
  if (o.cap)
    p.hard_cap = *o.cap;
  try {
    p.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  return p;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t trial) {
  return Rng::derive(Rng::derive(master, stream), trial);
}

Formula trial_formula(std::size_t n, double r, std::size_t k, std::uint64_t seed) {
  return generate_uniform(n, clause_count_for_density(r, n), k, Rng::derive(seed, 0));
}

std::uint64_t walk_seed(std::uint64_t seed) { return Rng::derive(seed, 1); }

namespace {

std::string fmt(const char *spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

// Fatal consistency check behind every reported success.
void verify_model(const Formula &f, const Assignment &a) {
  if (!unsat_indices(f, a).empty())
    throw std::logic_error("internal error: reported model leaves clauses unsatisfied");
}

Formula load_or_generate(const ExperimentConfig &cfg, double r) {
  if (cfg.formula_path.empty())
    return trial_formula(cfg.n, r, cfg.k, cfg.seed);
  try {
    return read_dimacs_file(cfg.formula_path);
  } catch (const std::exception &e) {
    throw ConfigError(cfg.formula_path + ": " + e.what());
  }
}

Json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const std::exception &e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void require_json(const ExperimentConfig &cfg, const char *verb) {
  if (cfg.format == "csv")
    throw ConfigError(std::string(verb) + " only writes JSON");
}

void emit(std::ostream &out, const Json &j) { out << j.dump(2) << '\n'; }

struct LockstepSummary {
  bool success = false;
  std::uint64_t flips = 0;
  std::size_t d_peak = 0;
  std::size_t z_peak = 0;
};

// Walksat run through the analysis process (same choices, same flips) so
// that the |D| and |Z| peaks come for free.
LockstepSummary lockstep_trial(const Formula &f, const pi::ProcessParams &params,
                               std::uint64_t budget, std::uint64_t seed) {
  pi::PiProcess process(f, params);
  Rng rng(seed);
  LockstepSummary s;
  s.d_peak = process.d_size();
  while (process.t() < budget) {
    auto rec = process.step(rng);
    if (!rec)
      break;
    s.d_peak = std::max(s.d_peak, rec->d_size);
    s.z_peak = std::max(s.z_peak, rec->z_size);
  }
  s.flips = process.t();
  s.success = process.satisfied();
  if (s.success)
    verify_model(f, process.sigma());
  return s;
}

} // namespace

SweepRow sweep_density(const ExperimentConfig &cfg, double r, std::size_t density_index) {
  const auto params = make_params(cfg.overrides, cfg.k, cfg.n);
  const std::uint64_t budget = cfg.budget();
  auto results = parallel::map_indexed<LockstepSummary>(cfg.trials, [&](std::size_t t) {
    const auto seed = trial_seed(cfg.seed, density_index, t);
    return lockstep_trial(trial_formula(cfg.n, r, cfg.k, seed), params, budget, walk_seed(seed));
  });
  SweepRow row;
  row.r = r;
  row.m = clause_count_for_density(r, cfg.n);
  row.trials = cfg.trials;
  double flips = 0, d_peak = 0, z_peak = 0;
  for (const auto &s : results) {
    row.successes += s.success;
    flips += static_cast<double>(s.flips);
    d_peak += static_cast<double>(s.d_peak);
    z_peak += static_cast<double>(s.z_peak);
  }
  const double trials = static_cast<double>(cfg.trials);
  row.success_rate = static_cast<double>(row.successes) / trials;
  row.mean_flips = flips / trials;
  row.mean_d_peak = d_peak / trials;
  row.mean_z_peak = z_peak / trials;
  row.wilson95 = stats::wilson95(row.successes, row.trials);
  return row;
}

DriftReport measure_drift(const ExperimentConfig &cfg) {
  struct Partial {
    std::size_t steps = 0, c1 = 0, c1_fresh = 0, c2 = 0, c2_hdec = 0;
    double sum = 0, c1_sum = 0, c2_sum = 0;
    bool satisfied = false;
  };
  const double r = cfg.densities().front();
  const auto params = make_params(cfg.overrides, cfg.k, cfg.n);
  auto parts = parallel::map_indexed<Partial>(cfg.trials, [&](std::size_t t) {
    const auto seed = trial_seed(cfg.seed, 0, t);
    const Formula f = trial_formula(cfg.n, r, cfg.k, seed);
    const auto trace = pi::run_instrumented(f, params, walk_seed(seed));
    Partial p;
    p.satisfied = trace.outcome == pi::TraceOutcome::satisfied;
    std::int64_t prev = 0, prev_h = 0;
    for (const auto &rec : trace.steps) {
      if (rec.t > params.t_star)
        break;
      const double inc = static_cast<double>(rec.s_prime + rec.h_prime - prev);
      ++p.steps;
      p.sum += inc;
      if (!rec.chosen_in_z) {
        ++p.c1;
        p.c1_sum += inc;
        p.c1_fresh += rec.fresh_slot;
      } else {
        ++p.c2;
        p.c2_sum += inc;
        p.c2_hdec += rec.h_prime - prev_h == -1;
      }
      prev = rec.s_prime + rec.h_prime;
      prev_h = rec.h_prime;
    }
    return p;
  });
  DriftReport rep;
  rep.runs = cfg.trials;
  double sum = 0, c1_sum = 0, c2_sum = 0;
  std::size_t c1_fresh = 0, c2_hdec = 0;
  for (const auto &p : parts) {
    rep.steps += p.steps;
    rep.case1_steps += p.c1;
    rep.case2_steps += p.c2;
    rep.satisfied_runs += p.satisfied;
    sum += p.sum;
    c1_sum += p.c1_sum;
    c2_sum += p.c2_sum;
    c1_fresh += p.c1_fresh;
    c2_hdec += p.c2_hdec;
  }
  auto ratio = [](double a, std::size_t b) { return b == 0 ? 0.0 : a / static_cast<double>(b); };
  rep.mean_increment = ratio(sum, rep.steps);
  rep.case1_mean_increment = ratio(c1_sum, rep.case1_steps);
  rep.case1_fresh_fraction = ratio(static_cast<double>(c1_fresh), rep.case1_steps);
  rep.case2_mean_increment = ratio(c2_sum, rep.case2_steps);
  rep.case2_h_decrement_fraction = ratio(static_cast<double>(c2_hdec), rep.case2_steps);
  return rep;
}

BoundsReport measure_bounds(const ExperimentConfig &cfg) {
  struct Maxima {
    std::size_t d0 = 0, d = 0, z = 0;
  };
  const double r = cfg.densities().front();
  const auto params = make_params(cfg.overrides, cfg.k, cfg.n);
  auto maxima = parallel::map_indexed<Maxima>(cfg.trials, [&](std::size_t t) {
    const auto seed = trial_seed(cfg.seed, 0, t);
    const Formula f = trial_formula(cfg.n, r, cfg.k, seed);
    const auto trace = pi::run_instrumented(f, params, walk_seed(seed));
    Maxima mx;
    mx.d0 = mx.d = trace.initial.d_size;
    for (const auto &rec : trace.steps) {
      if (rec.t > params.t_star)
        break;
      mx.d = std::max(mx.d, rec.d_size);
      mx.z = std::max(mx.z, rec.z_size);
    }
    return mx;
  });
  BoundsReport rep;
  rep.runs = cfg.trials;
  rep.m = clause_count_for_density(r, cfg.n);
  rep.d_bound = std::ldexp(static_cast<double>(rep.m), 2 - static_cast<int>(cfg.k));
  rep.z_bound = params.epsilon * static_cast<double>(cfg.n);
  for (const auto &mx : maxima) {
    rep.d_initial.push_back(mx.d0);
    rep.d_max.push_back(mx.d);
    rep.z_max.push_back(mx.z);
    const bool dv = static_cast<double>(mx.d) > rep.d_bound;
    const bool zv = static_cast<double>(mx.z) > rep.z_bound;
    rep.d_violations += dv;
    rep.z_violations += zv;
    rep.any_violations += dv || zv;
  }
  rep.violation_rate = static_cast<double>(rep.any_violations) / static_cast<double>(rep.runs);
  return rep;
}

EquivalenceReport lazy_equivalence(const ExperimentConfig &cfg) {
  struct Pair {
    double eager_t = 0, lazy_t = 0, eager_d = 0, lazy_d = 0;
  };
  const double r = cfg.densities().front();
  const std::size_t m = clause_count_for_density(r, cfg.n);
  const auto params = make_params(cfg.overrides, cfg.k, cfg.n);
  auto terminal_d = [](const pi::Trace &tr) {
    return static_cast<double>(tr.steps.empty() ? tr.initial.d_size : tr.steps.back().d_size);
  };
  auto pairs = parallel::map_indexed<Pair>(cfg.trials, [&](std::size_t t) {
    const auto seed = trial_seed(cfg.seed, 0, t);
    const Formula f = trial_formula(cfg.n, r, cfg.k, seed);
    const auto eager = pi::run_instrumented(f, params, walk_seed(seed));
    // Separate streams keep the two samples independent.
    pi::PiProcess lazy_process(
        std::make_unique<pi::LazySource>(cfg.n, m, cfg.k, Rng::derive(seed, 2), cfg.lazy_bias),
        params);
    const auto lazy = pi::run_instrumented(lazy_process, Rng::derive(seed, 3));
    return Pair{static_cast<double>(eager.steps.size()), static_cast<double>(lazy.steps.size()),
                terminal_d(eager), terminal_d(lazy)};
  });
  EquivalenceReport rep;
  rep.runs = cfg.trials;
  for (const auto &p : pairs) {
    rep.eager_t.push_back(p.eager_t);
    rep.lazy_t.push_back(p.lazy_t);
    rep.eager_d.push_back(p.eager_d);
    rep.lazy_d.push_back(p.lazy_d);
  }
  rep.ks_t = stats::ks_two_sample(rep.eager_t, rep.lazy_t);
  rep.ks_d = stats::ks_two_sample(rep.eager_d, rep.lazy_d);
  return rep;
}

// ---------------------------------------------------------------------------

int cmd_solve(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err) {
  cfg.validate();
  require_json(cfg, "solve");
  const double r = cfg.densities().front();
  const Formula f = load_or_generate(cfg, r);
  const std::uint64_t budget = cfg.t_max.value_or(f.num_vars());
  const auto result = walksat::run(f, budget, walk_seed(cfg.seed));
  const bool ok = result.outcome == walksat::Outcome::satisfied;
  if (ok)
    verify_model(f, result.assignment);
  std::string bits;
  for (Var v = 1; v <= f.num_vars(); ++v)
    bits += result.assignment[v] ? '1' : '0';
  Json j{{"schema", kSolveSchema},
         {"rng", std::string(Rng::kName)},
         {"source", cfg.formula_path.empty() ? "generated" : cfg.formula_path},
         {"n", f.num_vars()},
         {"m", f.num_clauses()},
         {"k", f.width()},
         {"r", f.density()},
         {"rho", rho_from_r(f.density(), f.width())},
         {"seed", cfg.seed},
         {"t_max", budget},
         {"outcome", ok ? "satisfied" : "failure"},
         {"flips", result.flips_used},
         {"verified", ok},
         {"assignment", bits}};
  emit(out, j);
  if (!ok)
    err << "no satisfying assignment within " << budget << " flips\n";
  return ok ? kOk : kUnsolved;
}

int cmd_sweep(const ExperimentConfig &cfg, std::ostream &out, std::ostream &) {
  cfg.validate();
  const auto densities = cfg.densities();
  std::vector<SweepRow> rows;
  for (std::size_t d = 0; d < densities.size(); ++d)
    rows.push_back(sweep_density(cfg, densities[d], d));

  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto &row : rows)
      arr.push_back(Json{{"k", cfg.k},
                         {"n", cfg.n},
                         {"m", row.m},
                         {"r", row.r},
                         {"rho", rho_from_r(row.r, cfg.k)},
                         {"t_max", cfg.budget()},
                         {"trials", row.trials},
                         {"successes", row.successes},
                         {"success_rate", row.success_rate},
                         {"wilson_lo", row.wilson95.lo},
                         {"wilson_hi", row.wilson95.hi},
                         {"mean_flips", row.mean_flips},
                         {"mean_d_peak", row.mean_d_peak},
                         {"mean_z_peak", row.mean_z_peak}});
    emit(out, Json{{"schema", kSweepSchema}, {"seed", cfg.seed}, {"rows", std::move(arr)}});
    return kOk;
  }
  out << "# " << kSweepSchema << " seed=" << cfg.seed << '\n';
  out << "k,n,m,r,rho,t_max,trials,successes,success_rate,wilson_lo,wilson_hi,mean_flips,"
         "mean_d_peak,mean_z_peak\n";
  for (const auto &row : rows) {
    out << cfg.k << ',' << cfg.n << ',' << row.m << ',' << fmt("%.10g", row.r) << ','
        << fmt("%.10g", rho_from_r(row.r, cfg.k)) << ',' << cfg.budget() << ',' << row.trials
        << ',' << row.successes << ',' << fmt("%.6f", row.success_rate) << ','
        << fmt("%.6f", row.wilson95.lo) << ',' << fmt("%.6f", row.wilson95.hi) << ','
        << fmt("%.4f", row.mean_flips) << ',' << fmt("%.4f", row.mean_d_peak) << ','
        << fmt("%.4f", row.mean_z_peak) << '\n';
  }
  return kOk;
}

int cmd_drift(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err) {
  cfg.validate();
  require_json(cfg, "drift");
  const auto rep = measure_drift(cfg);
  const double r = cfg.densities().front();
  Json j{{"schema", kDriftSchema},
         {"k", cfg.k},
         {"n", cfg.n},
         {"r", r},
         {"rho", rho_from_r(r, cfg.k)},
         {"seed", cfg.seed},
         {"params", trace_json::params_to_json(make_params(cfg.overrides, cfg.k, cfg.n))},
         {"runs", rep.runs},
         {"satisfied_runs", rep.satisfied_runs},
         {"steps", rep.steps}};
  if (rep.steps == 0) {
    j["empty"] = true;
    j["reason"] = "no steps recorded: every run was satisfied at t=0";
    emit(out, j);
    err << "drift: no data\n";
    return kOk;
  }
  j["empty"] = false;
  j["mean_increment"] = rep.mean_increment;
  j["case1"] = Json{{"steps", rep.case1_steps},
                    {"mean_increment", rep.case1_mean_increment},
                    {"fresh_fraction", rep.case1_fresh_fraction},
                    {"reference", 0.51}};
  j["case2"] = Json{{"steps", rep.case2_steps},
                    {"mean_increment", rep.case2_steps ? Json(rep.case2_mean_increment) : Json()},
                    {"h_decrement_fraction",
                     rep.case2_steps ? Json(rep.case2_h_decrement_fraction) : Json()},
                    {"reference", 0.8}};
  emit(out, j);
  return kOk;
}

int cmd_bounds(const ExperimentConfig &cfg, std::ostream &out, std::ostream &) {
  cfg.validate();
  require_json(cfg, "bounds");
  const auto rep = measure_bounds(cfg);
  const double r = cfg.densities().front();
  double d0_mean = 0;
  for (auto d : rep.d_initial)
    d0_mean += static_cast<double>(d);
  d0_mean /= static_cast<double>(rep.runs);
  Json j{{"schema", kBoundsSchema},
         {"k", cfg.k},
         {"n", cfg.n},
         {"m", rep.m},
         {"r", r},
         {"rho", rho_from_r(r, cfg.k)},
         {"seed", cfg.seed},
         {"params", trace_json::params_to_json(make_params(cfg.overrides, cfg.k, cfg.n))},
         {"runs", rep.runs},
         {"d_bound", rep.d_bound},
         {"z_bound", rep.z_bound},
         {"mean_d_initial", d0_mean},
         {"d_max", rep.d_max},
         {"z_max", rep.z_max},
         {"d_violations", rep.d_violations},
         {"z_violations", rep.z_violations},
         {"violation_rate", rep.violation_rate}};
  emit(out, j);
  return kOk;
}

int cmd_replay(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err) {
  require_json(cfg, "replay");
  if (cfg.formula_path.empty() || cfg.script_path.empty())
    throw ConfigError("replay needs --formula and --script");
  Formula f;
  try {
    f = read_dimacs_file(cfg.formula_path);
  } catch (const std::exception &e) {
    throw ConfigError(cfg.formula_path + ": " + e.what());
  }
  std::vector<pi::Choice> script;
  try {
    script = trace_json::parse_script(read_json_file(cfg.script_path));
  } catch (const std::invalid_argument &e) {
    throw ConfigError(cfg.script_path + ": " + e.what());
  }
  const auto params = make_params(cfg.overrides, f.width(), f.num_vars());
  pi::Trace trace;
  try {
    trace = pi::replay(f, params, script);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(std::string("replay: ") + e.what());
  }
  const Json j = trace_json::trace_to_json(trace, &f);
  emit(out, j);
  if (cfg.expected_path.empty())
    return kOk;
  const auto diff = trace_json::compare(read_json_file(cfg.expected_path), j);
  if (diff.equal)
    return kOk;
  err << "trace mismatch at " << diff.path << ": expected " << diff.expected << ", got "
      << diff.actual << '\n';
  return kMismatch;
}

int cmd_lazy_equivalence(const ExperimentConfig &cfg, std::ostream &out, std::ostream &) {
  cfg.validate();
  require_json(cfg, "lazy-equivalence");
  const auto rep = lazy_equivalence(cfg);
  const double r = cfg.densities().front();
  auto side = [](const std::vector<double> &t, const std::vector<double> &d) {
    return Json{{"mean_T", stats::mean(t)}, {"mean_final_D", stats::mean(d)}};
  };
  Json j{{"schema", kLazySchema},
         {"k", cfg.k},
         {"n", cfg.n},
         {"m", clause_count_for_density(r, cfg.n)},
         {"r", r},
         {"rho", rho_from_r(r, cfg.k)},
         {"seed", cfg.seed},
         {"lazy_bias", cfg.lazy_bias},
         {"runs", rep.runs},
         {"eager", side(rep.eager_t, rep.eager_d)},
         {"lazy", side(rep.lazy_t, rep.lazy_d)},
         {"ks_T", Json{{"statistic", rep.ks_t.statistic}, {"p_value", rep.ks_t.p_value}}},
         {"ks_final_D", Json{{"statistic", rep.ks_d.statistic}, {"p_value", rep.ks_d.p_value}}}};
  emit(out, j);
  return kOk;
}

int cmd_instrument(const ExperimentConfig &cfg, std::ostream &out, std::ostream &) {
  cfg.validate();
  require_json(cfg, "instrument");
  const double r = cfg.densities().front();
  const Formula f = load_or_generate(cfg, r);
  const auto params = make_params(cfg.overrides, f.width(), f.num_vars());
  const auto trace = pi::run_instrumented(f, params, walk_seed(cfg.seed));
  emit(out, trace_json::trace_to_json(trace));
  return kOk;
}

} // namespace wsl::experiments
