// walksat_lab: command-line front end of the experiment harness.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wsl/harness/experiments.hpp"

namespace ex = wsl::experiments;

namespace {

struct Options {
  ex::ExperimentConfig cfg;
  std::string out_path;
  std::optional<std::uint32_t> k1, k2, k3, lambda;
  std::optional<double> epsilon, theta, rich_fraction, match_fraction;
  std::optional<std::uint64_t> cap, t_max;
};

void add_common(CLI::App *cmd, Options &o) {
  cmd->add_option("--k", o.cfg.k, "clause width")->capture_default_str();
  cmd->add_option("--n", o.cfg.n, "number of variables")->capture_default_str();
  cmd->add_option("--r", o.cfg.r, "densities m/n, comma separated")->delimiter(',');
  cmd->add_option("--rho", o.cfg.rho, "densities as rho with r = rho 2^k / k (default 1/25)")
      ->delimiter(',');
  cmd->add_option("--trials", o.cfg.trials, "independent trials")->capture_default_str();
  cmd->add_option("--tmax", o.t_max, "flip budget (default n)");
  cmd->add_option("--seed", o.cfg.seed, "master seed")->capture_default_str();
  cmd->add_option("--k1", o.k1, "flipped-variable slots that pull a clause into Z (default ceil(0.49k))");
  cmd->add_option("--k2", o.k2, "slots that make a clause active (default ceil(0.48k))");
  cmd->add_option("--k3", o.k3, "slots that make a clause passive (default ceil(0.01k))");
  cmd->add_option("--lambda", o.lambda, "closure overlap (default ceil(sqrt k))");
  cmd->add_option("--epsilon", o.epsilon, "Z bound is epsilon n (default exp(-k^(2/3)))");
  cmd->add_option("--theta", o.theta, "sets T* = ceil(theta n)");
  cmd->add_option("--rich-fraction", o.rich_fraction, "rich threshold as a fraction of k (default 0.8)");
  cmd->add_option("--match-fraction", o.match_fraction, "matching fold as a fraction of k (default 0.9)");
  cmd->add_option("--cap", o.cap, "instrumented runs stop here (default T*)");
  cmd->add_option("--out", o.out_path, "output file (default stdout)");
  cmd->add_option("--format", o.cfg.format, "csv or json");
  cmd->add_option("--formula", o.cfg.formula_path, "DIMACS input");
  cmd->add_option("--script", o.cfg.script_path, "choice script JSON");
  cmd->add_option("--expected", o.cfg.expected_path, "expected trace JSON to compare against");
  cmd->add_option("--lazy-bias", o.cfg.lazy_bias,
                  "occurrence bias of the deferred sampler (1 = faithful)")
      ->capture_default_str();
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Random k-SAT laboratory: Walksat with its analysis process"};
  app.require_subcommand(1);
  Options o;

  using Verb = int (*)(const ex::ExperimentConfig &, std::ostream &, std::ostream &);
  const std::vector<std::tuple<const char *, const char *, Verb>> verbs{
      {"solve", "generate or load a formula and run Walksat", ex::cmd_solve},
      {"sweep", "success rates over a list of densities", ex::cmd_sweep},
      {"drift", "one-step increments of S'+H'", ex::cmd_drift},
      {"bounds", "maxima of |D_t| and |Z_t| against their bounds", ex::cmd_bounds},
      {"replay", "run the analysis process on injected choices", ex::cmd_replay},
      {"lazy-equivalence", "KS test of deferred against eager generation",
       ex::cmd_lazy_equivalence},
      {"instrument", "trace of one instrumented run", ex::cmd_instrument},
  };
  std::vector<std::pair<CLI::App *, Verb>> commands;
  for (const auto &[name, help, fn] : verbs) {
    CLI::App *cmd = app.add_subcommand(name, help);
    add_common(cmd, o);
    commands.emplace_back(cmd, fn);
  }

  CLI11_PARSE(app, argc, argv);

  auto &ov = o.cfg.overrides;
  ov.k1 = o.k1;
  ov.k2 = o.k2;
  ov.k3 = o.k3;
  ov.lambda = o.lambda;
  ov.epsilon = o.epsilon;
  ov.theta = o.theta;
  ov.rich_fraction = o.rich_fraction;
  ov.match_fraction = o.match_fraction;
  ov.cap = o.cap;
  o.cfg.t_max = o.t_max;

  for (const auto &[cmd, fn] : commands) {
    if (!cmd->parsed())
      continue;
    std::ostringstream buffer;
    int code = ex::kOk;
    try {
      code = fn(o.cfg, buffer, std::cerr);
    } catch (const ex::ConfigError &e) {
      std::cerr << "error: " << e.what() << '\n';
      return ex::kUsage;
    }
    if (o.out_path.empty()) {
      std::cout << buffer.str();
    } else {
      std::ofstream file(o.out_path, std::ios::binary);
      if (!(file << buffer.str())) {
        std::cerr << "error: cannot write " << o.out_path << '\n';
        return ex::kUsage;
      }
    }
    return code;
  }
  return ex::kUsage;
}
