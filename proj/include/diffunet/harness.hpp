#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "diffunet/network.hpp"
#include "diffunet/regularizers.hpp"
#include "diffunet/signal_model.hpp"
#include "diffunet/solvers.hpp"

namespace diffunet {

enum class Algorithm { Centralized, Single, ATC, CTA, LMS };

std::string algorithm_name(Algorithm a);

/// One requested curve: an algorithm, optionally with its own regularizer.
/// Written `alg` or `alg:reg` (e.g. `atc:wl1`); the text is the CSV label.
struct RunSpec {
  Algorithm algorithm = Algorithm::ATC;
  std::optional<RegularizerSpec> regularizer;
  std::string label;
};

/// Parses `centralized|single|atc|cta|lms` with an optional `:l1|:wl1|:sl0`
/// suffix. eps/sigma for the suffix come from the arguments.
RunSpec parse_run_spec(const std::string& text, std::optional<double> eps = std::nullopt,
                       std::optional<double> sigma = std::nullopt);

/// Seed of the shipped 10-node fixture topology (radius 0.5).
inline constexpr std::uint64_t kFixtureTopologySeed = 20160815;

struct TopologySource {
  std::optional<std::filesystem::path> file;
  double radius = 0.5;
  std::uint64_t seed = kFixtureTopologySeed;
};

/// Full experiment description. Defaults reproduce the reference setup:
/// 10 nodes, 20-dim vector, 40 samples, p = 0.2, unit signal and regressor
/// scale, noise 0.01, gamma = 10, mu = 0.01, l1, uniform A, C = I, 50 trials.
struct ExperimentConfig {
  int nodes = 10;
  int dim = 20;
  int samples = 40;
  double p = 0.2;
  double sigma_w = 1.0;
  double sigma_u = 1.0;
  double sigma_v = 0.01;
  double gamma = 10.0;
  double mu = 0.01;
  double mu_global = 0.01;
  std::string regularizer = "l1";
  double eps = kDefaultWeightedL1Eps;
  double sigma = kDefaultSmoothedL0Sigma;
  TopologySource topology;
  std::string policy_A = "uniform";
  std::string policy_C = "identity";
  std::vector<std::string> algorithms{"centralized", "single", "atc", "cta", "lms"};
  int trials = 50;
  int iterations = 500;
  std::uint64_t master_seed = 1;
  std::optional<int> msd_node;  // 0-based
  int single_sensor = 0;        // 0-based
  bool resample_topology = false;
  GammaMode gamma_mode = GammaMode::Full;
  int threads = 1;

  RegularizerSpec regularizer_spec() const;
  std::vector<RunSpec> run_specs() const;

  /// Throws InvalidParameter describing the first bad field.
  void validate() const;
};

/// Data of one Monte Carlo trial.
struct TrialData {
  GroundTruth truth;
  NetworkData data;
};

/// Draws trial `trial`: ground truth from substream (seed, trial,
/// kGroundTruthStream), node k's stream from substream (seed, trial, k).
TrialData generate_trial(const ExperimentConfig& cfg, int trial);

/// Topology used by `trial`: the file, or the generator (re-seeded per trial
/// when resample_topology is set).
Topology resolve_topology(const ExperimentConfig& cfg, int trial);

/// Trial-averaged curve. `msd_db[r]` is 10 log10 of the mean over trials of
/// the squared deviation at iteration r + 1.
struct MsdTrace {
  std::string label;
  std::vector<double> msd_db;
  std::vector<double> mean_sq_dev;
  std::vector<double> per_trial_final;  // final squared deviation of each used trial
  int trials_used = 0;
};

/// Averages per-trial squared-deviation curves in the linear domain, then
/// converts once to dB.
MsdTrace average_trials(const std::string& label, const std::vector<std::vector<double>>& sq_dev);

struct RunFailure {
  int trial = 0;
  std::string algorithm;
  int iteration = 0;
  int node = -1;
};

struct ExperimentResult {
  std::vector<MsdTrace> traces;  // in requested order
  std::vector<RunFailure> failures;

  const MsdTrace& trace(const std::string& label) const;
};

/// Runs every requested algorithm on identical data per trial. A diverging
/// run is reported in `failures` and left out of that algorithm's average.
/// Results do not depend on `threads`.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Config files: `key = value` lines, `#` comments.

/// Applies one setting. Throws InvalidParameter for unknown keys or bad values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Parses a config stream on top of `base`. When `topology` names a file and
/// `N` is not given, N is taken from that file. Relative topology paths
/// resolve against `base_dir`.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<stream>",
                              const std::filesystem::path& base_dir = {},
                              ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Keys accepted by apply_setting.
const std::set<std::string>& config_keys();

// Output.

/// Header `iteration,<label>...`, then one row per iteration with six
/// decimals, LF line endings.
void write_csv(std::ostream& out, const std::vector<MsdTrace>& traces);
void emit_csv(const std::vector<MsdTrace>& traces, const std::filesystem::path& path);

/// Reads labels and msd_db columns back from write_csv output.
std::vector<MsdTrace> read_csv(std::istream& in);

/// Standalone SVG: one polyline per trace, axes "iteration" / "MSD (dB)", legend.
void write_svg(std::ostream& out, const std::vector<MsdTrace>& traces);
void emit_plot(const std::vector<MsdTrace>& traces, const std::filesystem::path& path);

/// Debug dump of every trial's ground truth and streams as CSV records:
/// `w_o,trial,m,value` and `obs,trial,node,i,d,y,u_1..u_M` (1-based ids).
void dump_data(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace diffunet
