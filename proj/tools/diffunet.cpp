// Command-line front end: run experiments, run the property suite, and
// generate or validate topology files.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "diffunet/checks.hpp"
#include "diffunet/error.hpp"
#include "diffunet/harness.hpp"
#include "diffunet/network.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitCheckFailed = 3;

struct RunOptions {
  std::string config;
  std::string out;
  std::string plot;
  std::string dump_data;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> iterations;
  std::optional<double> mu;
  std::optional<double> gamma;
  std::optional<std::string> regularizer;
  std::optional<double> eps;
  std::optional<double> sigma;
  std::optional<std::string> algorithms;
  std::optional<std::string> topology;
  std::optional<std::string> msd_node;
  std::optional<std::string> gamma_mode;
  std::optional<int> threads;
  bool resample_topology = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

diffunet::ExperimentConfig build_config(const RunOptions& o) {
  using diffunet::apply_setting;
  diffunet::ExperimentConfig base;
  if (const char* env = std::getenv("DIFFUNET_SEED")) {
    try {
      apply_setting(base, "seed", env);
    } catch (const diffunet::InvalidParameter&) {
      throw UsageError(std::string("DIFFUNET_SEED is not an unsigned integer: ") + env);
    }
  }

  diffunet::ExperimentConfig cfg;
  try {
    if (!o.config.empty()) {
      if (!std::filesystem::exists(o.config)) throw UsageError("config file not found: " + o.config);
      cfg = diffunet::load_config(o.config, base);
    } else {
      cfg = base;
    }

    auto set = [&](const char* key, const auto& value) {
      if (value) {
        std::ostringstream os;
        os.precision(17);
        os << *value;
        apply_setting(cfg, key, os.str());
      }
    };
    set("seed", o.seed);
    set("trials", o.trials);
    set("iterations", o.iterations);
    set("mu", o.mu);
    set("gamma", o.gamma);
    set("regularizer", o.regularizer);
    set("eps", o.eps);
    set("sigma", o.sigma);
    set("algorithms", o.algorithms);
    set("msd_node", o.msd_node);
    set("gamma_mode", o.gamma_mode);
    set("threads", o.threads);
    if (o.topology) {
      apply_setting(cfg, "topology", *o.topology);
      if (cfg.topology.file) cfg.nodes = diffunet::load_topology(*cfg.topology.file).size();
    }
    if (o.resample_topology) cfg.resample_topology = true;
    cfg.validate();
  } catch (const diffunet::InvalidParameter& e) {
    throw UsageError(e.what());
  } catch (const diffunet::ParseError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

int run_command(const RunOptions& o) {
  const diffunet::ExperimentConfig cfg = build_config(o);

  if (!o.dump_data.empty()) {
    std::ofstream dump(o.dump_data, std::ios::binary);
    if (!dump) throw diffunet::IoError("cannot write " + o.dump_data);
    diffunet::dump_data(cfg, dump);
  }

  const diffunet::ExperimentResult result = diffunet::run_experiment(cfg);
  if (o.out.empty())
    diffunet::write_csv(std::cout, result.traces);
  else
    diffunet::emit_csv(result.traces, o.out);
  if (!o.plot.empty()) diffunet::emit_plot(result.traces, o.plot);

  for (const auto& t : result.traces) {
    std::cerr << t.label << ": final MSD " << t.msd_db.back() << " dB over " << t.trials_used
              << " trials\n";
  }
  for (const auto& f : result.failures) {
    std::cerr << "divergence: trial " << f.trial + 1 << ", " << f.algorithm << ", iteration "
              << f.iteration;
    if (f.node >= 0) std::cerr << ", node " << f.node + 1;
    std::cerr << '\n';
  }
  return result.failures.empty() ? kExitOk : kExitRuntime;
}

int check_command(std::uint64_t seed) {
  const auto results = diffunet::run_property_suite(seed);
  return diffunet::print_check_results(std::cout, results) ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffusion steepest descent for one-bit compressed sensing over sensor networks"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a Monte Carlo MSD experiment");
  run_cmd->add_option("--config", run.config, "Experiment config file (key = value)");
  run_cmd->add_option("--out", run.out, "CSV output path (default: stdout)");
  run_cmd->add_option("--plot", run.plot, "SVG plot output path");
  run_cmd->add_option("--seed", run.seed, "Master seed (fallback: $DIFFUNET_SEED)");
  run_cmd->add_option("--trials", run.trials, "Number of Monte Carlo trials");
  run_cmd->add_option("--iters", run.iterations, "Iterations per run");
  run_cmd->add_option("--mu", run.mu, "Node step size");
  run_cmd->add_option("--gamma", run.gamma, "Sparsity weight");
  run_cmd->add_option("--regularizer", run.regularizer, "l1 | wl1 | sl0");
  run_cmd->add_option("--eps", run.eps, "Weighted-l1 epsilon");
  run_cmd->add_option("--sigma", run.sigma, "Smoothed-l0 sigma");
  run_cmd->add_option("--algorithms", run.algorithms,
                      "Comma list of centralized,single,atc,cta,lms (optionally alg:reg)");
  run_cmd->add_option("--topology", run.topology, "Edge-list file, or 'random'");
  run_cmd->add_option("--msd-node", run.msd_node, "Report one node (1-based) instead of the mean");
  run_cmd->add_flag("--resample-topology", run.resample_topology, "Draw a new topology per trial");
  run_cmd->add_option("--gamma-mode", run.gamma_mode, "Centralized regularizer weight: full | overN");
  run_cmd->add_option("--dump-data", run.dump_data, "Write generated ground truth and streams as CSV");
  run_cmd->add_option("--threads", run.threads, "Worker threads for trials");

  std::uint64_t check_seed = 7;
  auto* check_cmd = app.add_subcommand("check", "Run the numerical property suite");
  check_cmd->add_option("--seed", check_seed, "Seed for random instances");

  auto* topo_cmd = app.add_subcommand("topo", "Generate or validate topology files");
  topo_cmd->require_subcommand(1);
  int gen_nodes = 10;
  double gen_radius = 0.5;
  std::uint64_t gen_seed = diffunet::kFixtureTopologySeed;
  std::string gen_out;
  auto* gen_cmd = topo_cmd->add_subcommand("generate", "Random geometric topology");
  gen_cmd->add_option("--nodes", gen_nodes, "Node count")->check(CLI::Range(2, 100000));
  gen_cmd->add_option("--radius", gen_radius, "Connection radius in the unit square");
  gen_cmd->add_option("--seed", gen_seed, "Generator seed");
  gen_cmd->add_option("--out", gen_out, "Output path (default: stdout)");
  std::string validate_file;
  std::string validate_policy = "uniform";
  auto* val_cmd = topo_cmd->add_subcommand("validate", "Validate a topology and a combination policy");
  val_cmd->add_option("file", validate_file, "Edge-list file")->required();
  val_cmd->add_option("--policy", validate_policy, "uniform | metropolis | identity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return run_command(run);
    if (*check_cmd) return check_command(check_seed);
    if (*gen_cmd) {
      const auto topo = diffunet::gen_random_topology(gen_nodes, gen_radius, gen_seed);
      const std::vector<std::string> comments{
          "random geometric graph: " + std::to_string(gen_nodes) + " nodes, radius " +
              std::to_string(gen_radius) + ", seed " + std::to_string(gen_seed)};
      if (gen_out.empty())
        diffunet::write_topology(std::cout, topo, comments);
      else
        diffunet::save_topology(gen_out, topo, comments);
      return kExitOk;
    }
    if (*val_cmd) {
      const auto topo = diffunet::load_topology(validate_file);
      const auto report = diffunet::validate_combination(
          diffunet::make_policy(validate_policy, topo, diffunet::CombinationRole::A), topo);
      diffunet::print_violations(std::cout, report);
      std::cout << topo.size() << " nodes, " << topo.edges().size() << " edges, " << validate_policy
                << " policy " << (report.ok() ? "ok" : "violates constraints") << '\n';
      return report.ok() ? kExitOk : kExitCheckFailed;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
