#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "diffunet/network.hpp"
#include "diffunet/regularizers.hpp"
#include "diffunet/signal_model.hpp"

namespace diffunet {

/// Regularizer weight in the centralized gradient: Full uses gamma, the true
/// gradient of the global cost; OverN uses gamma / N, the per-node share.
enum class GammaMode { Full, OverN };

enum class DiffusionVariant { ATC, CTA };

/// Any estimate coordinate beyond this magnitude halts a run.
inline constexpr double kDivergenceThreshold = 1e12;

struct SolverConfig {
  double mu = 0.01;             // node step size mu_k, unless node_mu is set
  std::vector<double> node_mu;  // optional per-node step sizes
  double mu_global = 0.01;      // centralized step size
  double gamma = 10.0;
  RegularizerSpec reg;
  CombinationMatrix A;  // combines estimates
  CombinationMatrix C;  // weights neighbors' data in local costs
  int iterations = 500;
  GammaMode gamma_mode = GammaMode::Full;

  double step(int k) const { return node_mu.empty() ? mu : node_mu.at(static_cast<std::size_t>(k)); }
};

/// What a run records each iteration.
struct TraceOptions {
  const Eigen::VectorXd* truth = nullptr;  // MSD left NaN without it
  std::optional<int> msd_node;             // diffusion: single node instead of network mean
  bool record_cost = true;
  bool keep_history = false;  // store every iterate in SolverState::history
};

/// One row per completed iteration (1-based). For diffusion runs `sq_dev` is
/// the node-averaged squared deviation and `global_cost` is evaluated at the
/// node-averaged estimate.
struct TraceRow {
  int iteration = 0;
  double sq_dev = 0.0;
  double msd_db = 0.0;
  double global_cost = 0.0;
};

struct Divergence {
  int iteration = 0;  // iteration whose update blew up
  int node = -1;      // -1 for single-estimate runs
};

struct SolverState {
  Eigen::MatrixXd estimates;  // row k = current estimate of node k (one row for centralized)
  int iteration = 0;
  std::vector<TraceRow> trace;
  std::vector<Eigen::MatrixXd> history;
  std::optional<Divergence> divergence;

  bool diverged() const { return divergence.has_value(); }
  Eigen::VectorXd estimate(int k = 0) const { return estimates.row(k).transpose(); }
};

// Cost terms. Nodes are 0-based; `data` must be non-empty with equal widths.

/// sum_i (d(i) - S(u_i w))^2 for one stream.
double data_cost(const SensorStream& stream, const Eigen::Ref<const Eigen::VectorXd>& w);

/// Gradient of data_cost.
Eigen::VectorXd data_gradient(const SensorStream& stream, const Eigen::Ref<const Eigen::VectorXd>& w);

/// sum_k data_cost(k) + gamma f(w).
double global_cost(const Eigen::Ref<const Eigen::VectorXd>& w, const NetworkData& data, double gamma,
                   const RegularizerSpec& reg);

Eigen::VectorXd global_gradient(const Eigen::Ref<const Eigen::VectorXd>& w, const NetworkData& data,
                                double gamma, const RegularizerSpec& reg,
                                GammaMode mode = GammaMode::Full);

/// sum_l C[l][k] data_cost(l) + (gamma / N) f(w), N = data.size().
double local_cost(int k, const Eigen::Ref<const Eigen::VectorXd>& w, const NetworkData& data,
                  const CombinationMatrix& C, double gamma, const RegularizerSpec& reg);

Eigen::VectorXd local_gradient(int k, const Eigen::Ref<const Eigen::VectorXd>& w,
                               const NetworkData& data, const CombinationMatrix& C, double gamma,
                               const RegularizerSpec& reg);

// Algorithms. `w_init` is the starting estimate of every node.

/// Steepest descent on the global cost with step mu_global, all data each step.
SolverState run_centralized_sd(const NetworkData& data, const SolverConfig& config,
                               const Eigen::VectorXd& w_init, const TraceOptions& opts = {});

/// Steepest descent on one node's data with regularizer weight gamma / N.
SolverState run_single_sensor_sd(const NetworkData& data, const SolverConfig& config, int sensor,
                                 const Eigen::VectorXd& w_init, const TraceOptions& opts = {});

/// Synchronous diffusion steepest descent. Every node reads only the previous
/// half-step snapshot, so the result does not depend on node order.
SolverState run_diffusion_sd(const NetworkData& data, const Topology& topology,
                             const SolverConfig& config, DiffusionVariant variant,
                             const Eigen::VectorXd& w_init, const TraceOptions& opts = {});

/// Adapt-then-combine diffusion LMS on the unquantized observations y.
SolverState run_diffusion_lms(const NetworkData& data, const Topology& topology,
                              const SolverConfig& config, const Eigen::VectorXd& w_init,
                              const TraceOptions& opts = {});

}  // namespace diffunet
