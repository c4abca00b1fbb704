#include "diffunet/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "diffunet/error.hpp"
#include "diffunet/metrics.hpp"

namespace diffunet {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  if (!(in >> out) || !(in >> std::ws).eof())
    throw InvalidParameter("bad value '" + value + "' for key '" + key + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw InvalidParameter("bad boolean '" + value + "' for key '" + key + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct TrialOutput {
  std::vector<std::vector<double>> sq_dev;  // per run spec; empty when the run diverged
  std::vector<RunFailure> failures;
};

TrialOutput run_trial(const ExperimentConfig& cfg, const std::vector<RunSpec>& specs,
                      const std::optional<Topology>& fixed, int trial) {
  const Topology topology = fixed ? *fixed : resolve_topology(cfg, trial);
  const TrialData td = generate_trial(cfg, trial);
  const Eigen::VectorXd w_init = Eigen::VectorXd::Zero(cfg.dim);

  TraceOptions opts;
  opts.truth = &td.truth.w;
  opts.msd_node = cfg.msd_node;
  opts.record_cost = false;

  TrialOutput out;
  out.sq_dev.resize(specs.size());
  for (std::size_t a = 0; a < specs.size(); ++a) {
    const RunSpec& spec = specs[a];
    SolverConfig sc;
    sc.mu = cfg.mu;
    sc.mu_global = cfg.mu_global;
    sc.gamma = cfg.gamma;
    sc.reg = spec.regularizer.value_or(cfg.regularizer_spec());
    sc.A = make_policy(cfg.policy_A, topology, CombinationRole::A);
    sc.C = make_policy(cfg.policy_C, topology, CombinationRole::C);
    sc.iterations = cfg.iterations;
    sc.gamma_mode = cfg.gamma_mode;

    SolverState state;
    switch (spec.algorithm) {
      case Algorithm::Centralized:
        state = run_centralized_sd(td.data, sc, w_init, opts);
        break;
      case Algorithm::Single:
        state = run_single_sensor_sd(td.data, sc, cfg.single_sensor, w_init, opts);
        break;
      case Algorithm::ATC:
        state = run_diffusion_sd(td.data, topology, sc, DiffusionVariant::ATC, w_init, opts);
        break;
      case Algorithm::CTA:
        state = run_diffusion_sd(td.data, topology, sc, DiffusionVariant::CTA, w_init, opts);
        break;
      case Algorithm::LMS:
        state = run_diffusion_lms(td.data, topology, sc, w_init, opts);
        break;
    }
    if (state.divergence) {
      out.failures.push_back({trial, spec.label, state.divergence->iteration, state.divergence->node});
      continue;
    }
    auto& curve = out.sq_dev[a];
    curve.reserve(state.trace.size());
    for (const auto& row : state.trace) curve.push_back(row.sq_dev);
  }
  return out;
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Centralized:
      return "centralized";
    case Algorithm::Single:
      return "single";
    case Algorithm::ATC:
      return "atc";
    case Algorithm::CTA:
      return "cta";
    case Algorithm::LMS:
      return "lms";
  }
  return "?";
}

RunSpec parse_run_spec(const std::string& text, std::optional<double> eps, std::optional<double> sigma) {
  RunSpec spec;
  spec.label = text;
  const auto colon = text.find(':');
  const std::string alg = text.substr(0, colon);
  if (alg == "centralized")
    spec.algorithm = Algorithm::Centralized;
  else if (alg == "single")
    spec.algorithm = Algorithm::Single;
  else if (alg == "atc")
    spec.algorithm = Algorithm::ATC;
  else if (alg == "cta")
    spec.algorithm = Algorithm::CTA;
  else if (alg == "lms")
    spec.algorithm = Algorithm::LMS;
  else
    throw InvalidParameter("unknown algorithm '" + alg +
                           "' (expected centralized, single, atc, cta or lms)");
  if (colon != std::string::npos) spec.regularizer = parse_regularizer(text.substr(colon + 1), eps, sigma);
  return spec;
}

RegularizerSpec ExperimentConfig::regularizer_spec() const {
  return parse_regularizer(regularizer, eps, sigma);
}

std::vector<RunSpec> ExperimentConfig::run_specs() const {
  std::vector<RunSpec> specs;
  for (const auto& a : algorithms) specs.push_back(parse_run_spec(a, eps, sigma));
  return specs;
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw InvalidParameter(what);
  };
  require(nodes >= 1, "N must be >= 1");
  require(dim >= 1, "M must be >= 1");
  require(samples >= 1, "I must be >= 1");
  require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
  require(sigma_w > 0.0, "sigma_w must be positive");
  require(sigma_u > 0.0, "sigma_u must be positive");
  require(sigma_v >= 0.0, "sigma_v must be nonnegative");
  require(gamma >= 0.0 && std::isfinite(gamma), "gamma must be nonnegative");
  require(mu > 0.0 && std::isfinite(mu), "mu must be positive");
  require(mu_global > 0.0 && std::isfinite(mu_global), "mu_global must be positive");
  require(trials >= 1, "trials must be >= 1");
  require(iterations >= 1, "iterations must be >= 1");
  require(threads >= 1, "threads must be >= 1");
  require(!msd_node || (*msd_node >= 0 && *msd_node < nodes), "msd_node out of range");
  require(single_sensor >= 0 && single_sensor < nodes, "single_sensor out of range");
  require(!topology.file || !resample_topology, "resample_topology needs a generated topology");
  require(topology.file || nodes >= 2, "generated topologies need N >= 2");
  require(!algorithms.empty(), "no algorithms requested");
  for (const auto& policy : {policy_A, policy_C})
    require(policy == "uniform" || policy == "metropolis" || policy == "identity",
            "unknown combination policy '" + policy + "'");
  regularizer_spec();
  const auto specs = run_specs();
  std::set<std::string> labels;
  for (const auto& s : specs) require(labels.insert(s.label).second, "duplicate algorithm " + s.label);
}

TrialData generate_trial(const ExperimentConfig& cfg, int trial) {
  TrialData td;
  const auto t = static_cast<std::uint64_t>(trial);
  Rng truth_rng = Rng::substream(cfg.master_seed, t, kGroundTruthStream);
  td.truth = gen_sparse_vector(cfg.dim, cfg.p, cfg.sigma_w, truth_rng);
  td.data.reserve(static_cast<std::size_t>(cfg.nodes));
  for (int k = 0; k < cfg.nodes; ++k) {
    Rng node_rng = Rng::substream(cfg.master_seed, t, static_cast<std::uint64_t>(k));
    td.data.push_back(gen_sensor_stream(td.truth, k, cfg.samples, cfg.sigma_u, cfg.sigma_v, node_rng));
  }
  return td;
}

Topology resolve_topology(const ExperimentConfig& cfg, int trial) {
  if (cfg.topology.file) {
    Topology t = load_topology(*cfg.topology.file);
    if (t.size() != cfg.nodes)
      throw InvalidParameter("topology file " + cfg.topology.file->string() + " has " +
                             std::to_string(t.size()) + " nodes but N = " + std::to_string(cfg.nodes));
    return t;
  }
  const std::uint64_t seed =
      cfg.resample_topology
          ? derive_seed(cfg.topology.seed, static_cast<std::uint64_t>(trial), kTopologyStream)
          : cfg.topology.seed;
  return gen_random_topology(cfg.nodes, cfg.topology.radius, seed);
}

MsdTrace average_trials(const std::string& label, const std::vector<std::vector<double>>& sq_dev) {
  MsdTrace trace;
  trace.label = label;
  std::size_t length = 0;
  for (const auto& curve : sq_dev) length = std::max(length, curve.size());
  trace.mean_sq_dev.assign(length, 0.0);
  for (const auto& curve : sq_dev) {
    if (curve.empty()) continue;
    if (curve.size() != length) throw DimensionMismatch("trial curves differ in length");
    for (std::size_t r = 0; r < length; ++r) trace.mean_sq_dev[r] += curve[r];
    trace.per_trial_final.push_back(curve.back());
    ++trace.trials_used;
  }
  trace.msd_db.resize(length);
  for (std::size_t r = 0; r < length; ++r) {
    trace.mean_sq_dev[r] /= static_cast<double>(trace.trials_used);
    trace.msd_db[r] = sq_dev_to_db(trace.mean_sq_dev[r]);
  }
  return trace;
}

const MsdTrace& ExperimentResult::trace(const std::string& label) const {
  for (const auto& t : traces)
    if (t.label == label) return t;
  throw InvalidParameter("no trace labeled '" + label + "'");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto specs = cfg.run_specs();
  std::optional<Topology> fixed;
  if (!cfg.resample_topology) fixed = resolve_topology(cfg, 0);

  std::vector<TrialOutput> outputs(static_cast<std::size_t>(cfg.trials));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int t = next++; t < cfg.trials; t = next++) {
      try {
        outputs[static_cast<std::size_t>(t)] = run_trial(cfg, specs, fixed, t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = cfg.trials;
      }
    }
  };
  const int workers = std::min(cfg.threads, cfg.trials);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  ExperimentResult result;
  for (std::size_t a = 0; a < specs.size(); ++a) {
    std::vector<std::vector<double>> curves;
    curves.reserve(outputs.size());
    for (const auto& o : outputs) curves.push_back(o.sq_dev[a]);
    MsdTrace trace = average_trials(specs[a].label, curves);
    if (trace.trials_used == 0)
      trace.msd_db.assign(static_cast<std::size_t>(cfg.iterations), std::nan(""));
    result.traces.push_back(std::move(trace));
  }
  for (const auto& o : outputs)
    result.failures.insert(result.failures.end(), o.failures.begin(), o.failures.end());
  return result;
}

const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys{
      "N",        "M",          "I",          "p",          "sigma_w",        "sigma_u",
      "sigma_v",  "gamma",      "mu",         "mu_global",  "regularizer",    "eps",
      "sigma",    "algorithms", "topology",   "topology_radius", "topology_seed", "policy_A",
      "policy_C", "trials",     "iterations", "seed",       "msd_node",       "single_sensor",
      "resample_topology",      "gamma_mode", "threads"};
  return keys;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "N") {
    cfg.nodes = parse_number<int>(key, value);
  } else if (key == "M") {
    cfg.dim = parse_number<int>(key, value);
  } else if (key == "I") {
    cfg.samples = parse_number<int>(key, value);
  } else if (key == "p") {
    cfg.p = parse_number<double>(key, value);
  } else if (key == "sigma_w") {
    cfg.sigma_w = parse_number<double>(key, value);
  } else if (key == "sigma_u") {
    cfg.sigma_u = parse_number<double>(key, value);
  } else if (key == "sigma_v") {
    cfg.sigma_v = parse_number<double>(key, value);
  } else if (key == "gamma") {
    cfg.gamma = parse_number<double>(key, value);
  } else if (key == "mu") {
    cfg.mu = parse_number<double>(key, value);
  } else if (key == "mu_global") {
    cfg.mu_global = parse_number<double>(key, value);
  } else if (key == "regularizer") {
    parse_regularizer(value);
    cfg.regularizer = value;
  } else if (key == "eps") {
    cfg.eps = parse_number<double>(key, value);
  } else if (key == "sigma") {
    cfg.sigma = parse_number<double>(key, value);
  } else if (key == "algorithms") {
    auto list = split_list(value);
    for (const auto& a : list) parse_run_spec(a);
    cfg.algorithms = std::move(list);
  } else if (key == "topology") {
    if (value == "random" || value.empty())
      cfg.topology.file.reset();
    else
      cfg.topology.file = value;
  } else if (key == "topology_radius") {
    cfg.topology.radius = parse_number<double>(key, value);
  } else if (key == "topology_seed") {
    cfg.topology.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "policy_A") {
    cfg.policy_A = value;
  } else if (key == "policy_C") {
    cfg.policy_C = value;
  } else if (key == "trials") {
    cfg.trials = parse_number<int>(key, value);
  } else if (key == "iterations") {
    cfg.iterations = parse_number<int>(key, value);
  } else if (key == "seed") {
    cfg.master_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "msd_node") {
    if (value == "all" || value == "mean")
      cfg.msd_node.reset();
    else
      cfg.msd_node = parse_number<int>(key, value) - 1;
  } else if (key == "single_sensor") {
    cfg.single_sensor = parse_number<int>(key, value) - 1;
  } else if (key == "resample_topology") {
    cfg.resample_topology = parse_bool(key, value);
  } else if (key == "gamma_mode") {
    if (value == "full")
      cfg.gamma_mode = GammaMode::Full;
    else if (value == "overN")
      cfg.gamma_mode = GammaMode::OverN;
    else
      throw InvalidParameter("gamma_mode must be full or overN");
  } else if (key == "threads") {
    cfg.threads = parse_number<int>(key, value);
  } else {
    throw InvalidParameter("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::istream& in, const std::string& source,
                              const std::filesystem::path& base_dir, ExperimentConfig base) {
  ExperimentConfig cfg = std::move(base);
  bool nodes_given = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    try {
      apply_setting(cfg, key, line.substr(eq + 1));
    } catch (const InvalidParameter& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (key == "N") nodes_given = true;
  }
  if (cfg.topology.file && cfg.topology.file->is_relative() && !base_dir.empty())
    cfg.topology.file = base_dir / *cfg.topology.file;
  if (cfg.topology.file && !nodes_given) cfg.nodes = load_topology(*cfg.topology.file).size();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  return parse_config(in, path.string(), path.parent_path(), std::move(base));
}

}  // namespace diffunet
