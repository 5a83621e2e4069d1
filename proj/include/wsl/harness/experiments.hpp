#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsl/formula.hpp"
#include "wsl/pi_process.hpp"
#include "wsl/harness/stats.hpp"

namespace wsl::experiments {

/// Default density anchor: r = rho0 * 2^k / k.
inline constexpr double kRho0 = 1.0 / 25.0;

inline constexpr const char *kSolveSchema = "walksat-lab.solve.v1";
inline constexpr const char *kSweepSchema = "walksat-lab.sweep.v1";
inline constexpr const char *kDriftSchema = "walksat-lab.drift.v1";
inline constexpr const char *kBoundsSchema = "walksat-lab.bounds.v1";
inline constexpr const char *kLazySchema = "walksat-lab.lazy-equivalence.v1";

/// Exit codes shared by every verb.
enum ExitCode : int { kOk = 0, kUsage = 1, kUnsolved = 2, kMismatch = 3 };

/// Bad user input (unreadable file, invalid script, inconsistent flags).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ParamOverrides {
  std::optional<std::uint32_t> k1, k2, k3, lambda;
  std::optional<double> epsilon, theta, rich_fraction, match_fraction;
  std::optional<std::uint64_t> cap;
};

struct ExperimentConfig {
  std::size_t k = 5;
  std::size_t n = 1000;
  std::vector<double> r;   ///< explicit densities; take precedence over rho
  std::vector<double> rho; ///< r = rho * 2^k / k
  std::size_t trials = 1;
  std::optional<std::uint64_t> t_max; ///< solve/sweep budget, default n
  std::uint64_t seed = 1;
  ParamOverrides overrides;
  std::string formula_path;
  std::string script_path;
  std::string expected_path;
  std::string format; ///< "csv" or "json"; empty picks the verb default
  double lazy_bias = 1.0;

  /// Throws ConfigError.
  void validate() const;
  /// Densities r to run, in order; rho0 when neither list is given.
  std::vector<double> densities() const;
  std::uint64_t budget() const { return t_max.value_or(n); }
};

double r_from_rho(double rho, std::size_t k);
double rho_from_r(double r, std::size_t k);

pi::ProcessParams make_params(const ParamOverrides &o, std::size_t k, std::size_t n);

/// Seed of trial `trial` in stream `stream` (e.g. the density index).
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t trial);

/// Uniform formula for a trial: m = ceil(r n), drawn from derive(seed, 0).
/// Walks of the same trial use derive(seed, 1).
Formula trial_formula(std::size_t n, double r, std::size_t k, std::uint64_t seed);
std::uint64_t walk_seed(std::uint64_t seed);

struct SweepRow {
  double r = 0.0;
  std::size_t m = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double mean_flips = 0.0;
  double mean_d_peak = 0.0;
  double mean_z_peak = 0.0;
  stats::Interval wilson95;
};

SweepRow sweep_density(const ExperimentConfig &cfg, double r, std::size_t density_index);

struct DriftReport {
  std::size_t runs = 0;
  std::size_t steps = 0;
  double mean_increment = 0.0;
  std::size_t case1_steps = 0;
  double case1_mean_increment = 0.0;
  double case1_fresh_fraction = 0.0;
  std::size_t case2_steps = 0;
  double case2_mean_increment = 0.0;
  double case2_h_decrement_fraction = 0.0;
  std::size_t satisfied_runs = 0;
};

DriftReport measure_drift(const ExperimentConfig &cfg);

struct BoundsReport {
  std::size_t runs = 0;
  std::size_t m = 0;
  double d_bound = 0.0; ///< 2^(2-k) m
  double z_bound = 0.0; ///< epsilon n
  std::vector<std::size_t> d_max, z_max, d_initial;
  std::size_t d_violations = 0, z_violations = 0, any_violations = 0;
  double violation_rate = 0.0;
};

BoundsReport measure_bounds(const ExperimentConfig &cfg);

struct EquivalenceReport {
  std::size_t runs = 0;
  std::vector<double> eager_t, lazy_t, eager_d, lazy_d;
  stats::KsResult ks_t, ks_d;
};

/// Eager and deferred-decision runs from the same trial seeds. The lazy
/// side uses cfg.lazy_bias (1 is the faithful sampler).
EquivalenceReport lazy_equivalence(const ExperimentConfig &cfg);

// CLI verbs. Each writes its primary output to `out` and diagnostics to
// `err`, and returns an ExitCode. They throw ConfigError on bad input.
int cmd_solve(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_sweep(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_drift(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_bounds(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_replay(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_lazy_equivalence(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_instrument(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err);

} // namespace wsl::experiments
