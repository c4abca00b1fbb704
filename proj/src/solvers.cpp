#include "diffunet/solvers.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "diffunet/error.hpp"
#include "diffunet/metrics.hpp"
#include "diffunet/surrogate.hpp"

namespace diffunet {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_data(const NetworkData& data, Eigen::Index dim) {
  if (data.empty()) throw InvalidParameter("no sensor data");
  for (const auto& s : data) {
    if (s.dim() != dim)
      throw DimensionMismatch("estimate length " + std::to_string(dim) +
                              " does not match regressor width " + std::to_string(s.dim()) +
                              " of node " + std::to_string(s.node + 1));
    if (s.d.size() != s.samples() || s.y.size() != s.samples())
      throw DimensionMismatch("observation count does not match regressor rows");
  }
}

void check_node(int k, const NetworkData& data) {
  if (k < 0 || k >= static_cast<int>(data.size()))
    throw InvalidParameter("unknown node " + std::to_string(k + 1));
}

void check_weights(const CombinationMatrix& m, const NetworkData& data, const char* name) {
  const auto n = static_cast<Eigen::Index>(data.size());
  if (m.W.rows() != n || m.W.cols() != n)
    throw DimensionMismatch(std::string("combination matrix ") + name + " must be " +
                            std::to_string(n) + "x" + std::to_string(n));
}

// out += weight * grad data_cost(stream, w)
void add_data_gradient(const SensorStream& stream, const Eigen::Ref<const Eigen::VectorXd>& w,
                       double weight, Eigen::VectorXd& out) {
  const Eigen::VectorXd x = stream.U * w;
  Eigen::VectorXd r(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) r[i] = -2.0 * (stream.d[i] - s(x[i])) * s_prime(x[i]);
  out.noalias() += weight * (stream.U.transpose() * r);
}

// out += weight * grad of 0.5 * ||y - U w||^2, the LMS instantaneous cost
void add_lms_gradient(const SensorStream& stream, const Eigen::Ref<const Eigen::VectorXd>& w,
                      double weight, Eigen::VectorXd& out) {
  const Eigen::VectorXd e = stream.y - stream.U * w;
  out.noalias() -= weight * (stream.U.transpose() * e);
}

void add_reg_gradient(const RegularizerSpec& reg, const Eigen::Ref<const Eigen::VectorXd>& w,
                      double weight, Eigen::VectorXd& out) {
  out.noalias() += weight * reg_gradient(reg, w);
}

Eigen::VectorXd local_gradient_impl(int k, const Eigen::Ref<const Eigen::VectorXd>& w,
                                    const NetworkData& data, const CombinationMatrix& C,
                                    double gamma, const RegularizerSpec& reg, bool lms) {
  const int n = static_cast<int>(data.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(w.size());
  for (int l = 0; l < n; ++l) {
    const double c = C.W(l, k);
    if (c == 0.0) continue;
    if (lms)
      add_lms_gradient(data[l], w, c, g);
    else
      add_data_gradient(data[l], w, c, g);
  }
  add_reg_gradient(reg, w, gamma / n, g);
  return g;
}

bool blown_up(const Eigen::Ref<const Eigen::VectorXd>& w) {
  for (double v : w)
    if (!std::isfinite(v) || std::abs(v) > kDivergenceThreshold) return true;
  return false;
}

// Records trace rows for a run whose estimates live in the rows of a matrix.
class Recorder {
 public:
  Recorder(const NetworkData& data, const SolverConfig& config, const TraceOptions& opts)
      : data_(data), config_(config), opts_(opts) {}

  void record(SolverState& state) {
    const Eigen::MatrixXd& est = state.estimates;
    TraceRow row;
    row.iteration = state.iteration;
    if (opts_.truth) {
      if (opts_.msd_node && est.rows() > 1) {
        row.sq_dev = squared_deviation(est.row(*opts_.msd_node).transpose(), *opts_.truth);
      } else {
        double total = 0.0;
        for (Eigen::Index k = 0; k < est.rows(); ++k)
          total += squared_deviation(est.row(k).transpose(), *opts_.truth);
        row.sq_dev = total / static_cast<double>(est.rows());
      }
      row.msd_db = sq_dev_to_db(row.sq_dev);
    } else {
      row.sq_dev = kNaN;
      row.msd_db = kNaN;
    }
    if (opts_.record_cost) {
      const Eigen::VectorXd at = est.rows() == 1 ? Eigen::VectorXd(est.row(0).transpose())
                                                 : Eigen::VectorXd(est.colwise().mean().transpose());
      row.global_cost = global_cost(at, data_, config_.gamma, config_.reg);
    } else {
      row.global_cost = kNaN;
    }
    state.trace.push_back(row);
    if (opts_.keep_history) state.history.push_back(est);
  }

 private:
  const NetworkData& data_;
  const SolverConfig& config_;
  const TraceOptions& opts_;
};

void check_config(const SolverConfig& config, const NetworkData& data) {
  if (config.iterations < 1) throw InvalidParameter("iteration count must be >= 1");
  if (!(config.gamma >= 0.0)) throw InvalidParameter("gamma must be nonnegative");
  if (!config.node_mu.empty() && config.node_mu.size() != data.size())
    throw DimensionMismatch("per-node step sizes must cover every node");
  auto bad = [](double mu) { return !(mu > 0.0) || !std::isfinite(mu); };
  if (bad(config.mu) || bad(config.mu_global)) throw InvalidParameter("step sizes must be positive");
  for (double mu : config.node_mu)
    if (bad(mu)) throw InvalidParameter("step sizes must be positive");
  config.reg.validate();
}

// Steepest descent on a single estimate with gradient callback `grad`.
template <typename Gradient>
SolverState run_single_estimate(const NetworkData& data, const SolverConfig& config, double mu,
                                const Eigen::VectorXd& w_init, const TraceOptions& opts,
                                Gradient&& grad) {
  SolverState state;
  state.estimates = w_init.transpose();
  Recorder recorder(data, config, opts);
  Eigen::VectorXd w = w_init;
  for (int r = 1; r <= config.iterations; ++r) {
    Eigen::VectorXd next = w - mu * grad(w);
    if (blown_up(next)) {
      state.divergence = Divergence{r, -1};
      break;
    }
    w = std::move(next);
    state.estimates.row(0) = w.transpose();
    state.iteration = r;
    recorder.record(state);
  }
  return state;
}

Eigen::VectorXd combine(const Topology& topology, const CombinationMatrix& A,
                        const Eigen::MatrixXd& snapshot, int k) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(snapshot.cols());
  for (int l : topology.neighborhood(k)) {
    const double a = A.W(l, k);
    if (a == 0.0) continue;
    acc.noalias() += a * snapshot.row(l).transpose();
  }
  return acc;
}

SolverState run_diffusion(const NetworkData& data, const Topology& topology,
                          const SolverConfig& config, DiffusionVariant variant,
                          const Eigen::VectorXd& w_init, const TraceOptions& opts, bool lms) {
  check_data(data, w_init.size());
  check_config(config, data);
  const int n = static_cast<int>(data.size());
  if (topology.size() != n)
    throw DimensionMismatch("topology has " + std::to_string(topology.size()) + " nodes, data has " +
                            std::to_string(n));
  check_weights(config.A, data, "A");
  check_weights(config.C, data, "C");
  for (const auto* m : {&config.A, &config.C}) {
    if (!validate_combination(*m, topology).ok())
      throw InvalidParameter("combination matrix violates the topology constraints");
  }
  if (opts.msd_node && (*opts.msd_node < 0 || *opts.msd_node >= n))
    throw InvalidParameter("msd node out of range");

  SolverState state;
  state.estimates = w_init.transpose().replicate(n, 1);
  Recorder recorder(data, config, opts);
  Eigen::MatrixXd half(n, w_init.size());

  auto adapt = [&](int k, const Eigen::VectorXd& w) -> Eigen::VectorXd {
    return w - config.step(k) * local_gradient_impl(k, w, data, config.C, config.gamma, config.reg, lms);
  };

  for (int r = 1; r <= config.iterations; ++r) {
    Eigen::MatrixXd next(n, w_init.size());
    if (variant == DiffusionVariant::ATC) {
      for (int k = 0; k < n; ++k) half.row(k) = adapt(k, state.estimates.row(k).transpose()).transpose();
      for (int k = 0; k < n; ++k) next.row(k) = combine(topology, config.A, half, k).transpose();
    } else {
      for (int k = 0; k < n; ++k)
        half.row(k) = combine(topology, config.A, state.estimates, k).transpose();
      for (int k = 0; k < n; ++k) next.row(k) = adapt(k, half.row(k).transpose()).transpose();
    }
    for (int k = 0; k < n; ++k) {
      if (blown_up(next.row(k).transpose())) {
        state.divergence = Divergence{r, k};
        break;
      }
    }
    if (state.divergence) break;
    state.estimates = std::move(next);
    state.iteration = r;
    recorder.record(state);
  }
  return state;
}

}  // namespace

double data_cost(const SensorStream& stream, const Eigen::Ref<const Eigen::VectorXd>& w) {
  if (stream.dim() != w.size()) throw DimensionMismatch("estimate length does not match regressor width");
  const Eigen::VectorXd x = stream.U * w;
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double r = stream.d[i] - s(x[i]);
    total += r * r;
  }
  return total;
}

Eigen::VectorXd data_gradient(const SensorStream& stream, const Eigen::Ref<const Eigen::VectorXd>& w) {
  if (stream.dim() != w.size()) throw DimensionMismatch("estimate length does not match regressor width");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(w.size());
  add_data_gradient(stream, w, 1.0, g);
  return g;
}

double global_cost(const Eigen::Ref<const Eigen::VectorXd>& w, const NetworkData& data, double gamma,
                   const RegularizerSpec& reg) {
  check_data(data, w.size());
  double total = 0.0;
  for (const auto& stream : data) total += data_cost(stream, w);
  return total + gamma * reg_value(reg, w);
}

Eigen::VectorXd global_gradient(const Eigen::Ref<const Eigen::VectorXd>& w, const NetworkData& data,
                                double gamma, const RegularizerSpec& reg, GammaMode mode) {
  check_data(data, w.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(w.size());
  for (const auto& stream : data) add_data_gradient(stream, w, 1.0, g);
  const double weight = mode == GammaMode::Full ? gamma : gamma / static_cast<double>(data.size());
  add_reg_gradient(reg, w, weight, g);
  return g;
}

double local_cost(int k, const Eigen::Ref<const Eigen::VectorXd>& w, const NetworkData& data,
                  const CombinationMatrix& C, double gamma, const RegularizerSpec& reg) {
  check_data(data, w.size());
  check_node(k, data);
  check_weights(C, data, "C");
  const int n = static_cast<int>(data.size());
  double total = 0.0;
  for (int l = 0; l < n; ++l) {
    const double c = C.W(l, k);
    if (c != 0.0) total += c * data_cost(data[l], w);
  }
  return total + gamma / n * reg_value(reg, w);
}

Eigen::VectorXd local_gradient(int k, const Eigen::Ref<const Eigen::VectorXd>& w,
                               const NetworkData& data, const CombinationMatrix& C, double gamma,
                               const RegularizerSpec& reg) {
  check_data(data, w.size());
  check_node(k, data);
  check_weights(C, data, "C");
  return local_gradient_impl(k, w, data, C, gamma, reg, false);
}

SolverState run_centralized_sd(const NetworkData& data, const SolverConfig& config,
                               const Eigen::VectorXd& w_init, const TraceOptions& opts) {
  check_data(data, w_init.size());
  check_config(config, data);
  return run_single_estimate(data, config, config.mu_global, w_init, opts,
                             [&](const Eigen::VectorXd& w) {
                               return global_gradient(w, data, config.gamma, config.reg,
                                                      config.gamma_mode);
                             });
}

SolverState run_single_sensor_sd(const NetworkData& data, const SolverConfig& config, int sensor,
                                 const Eigen::VectorXd& w_init, const TraceOptions& opts) {
  check_data(data, w_init.size());
  check_config(config, data);
  check_node(sensor, data);
  const double reg_weight = config.gamma / static_cast<double>(data.size());
  return run_single_estimate(data, config, config.step(sensor), w_init, opts,
                             [&](const Eigen::VectorXd& w) {
                               Eigen::VectorXd g = Eigen::VectorXd::Zero(w.size());
                               add_data_gradient(data[sensor], w, 1.0, g);
                               add_reg_gradient(config.reg, w, reg_weight, g);
                               return g;
                             });
}

SolverState run_diffusion_sd(const NetworkData& data, const Topology& topology,
                             const SolverConfig& config, DiffusionVariant variant,
                             const Eigen::VectorXd& w_init, const TraceOptions& opts) {
  return run_diffusion(data, topology, config, variant, w_init, opts, false);
}

SolverState run_diffusion_lms(const NetworkData& data, const Topology& topology,
                              const SolverConfig& config, const Eigen::VectorXd& w_init,
                              const TraceOptions& opts) {
  return run_diffusion(data, topology, config, DiffusionVariant::ATC, w_init, opts, true);
}

}  // namespace diffunet
