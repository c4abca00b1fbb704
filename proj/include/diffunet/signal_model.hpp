#pragma once

#include <Eigen/Dense>
#include <vector>

#include "diffunet/rng.hpp"

namespace diffunet {

/// Bernoulli-Gaussian sparse vector and the parameters it was drawn with.
struct GroundTruth {
  Eigen::VectorXd w;
  double p = 0.2;
  double sigma_w = 1.0;

  Eigen::Index size() const { return w.size(); }
};

/// One node's measurements: rows of `U` are the regressors u_{k,i}, `y` the
/// unquantized values u_{k,i} w_o + v_k(i), `d` their signs.
struct SensorStream {
  int node = 0;  // 0-based
  Eigen::MatrixXd U;
  Eigen::VectorXd noise;
  Eigen::VectorXd y;
  Eigen::VectorXd d;  // entries in {-1, +1}
  double sigma_u = 1.0;
  double sigma_v = 0.0;

  Eigen::Index samples() const { return U.rows(); }
  Eigen::Index dim() const { return U.cols(); }
};

/// Streams of every node, indexed by node.
using NetworkData = std::vector<SensorStream>;

/// Sign with the tie convention sign(0) = +1.
inline double binary_sign(double x) { return x < 0.0 ? -1.0 : 1.0; }

/// Draws each of the `dim` coefficients as zero with probability 1 - p and
/// N(0, sigma_w^2) otherwise. Per coefficient: one uniform for the
/// activity test, then one Gaussian only when active.
GroundTruth gen_sparse_vector(Eigen::Index dim, double p, double sigma_w, Rng& rng);

/// Builds a stream from explicit regressors and noise:
/// y = U w_o + noise, d = binary_sign(y).
SensorStream make_sensor_stream(int node, Eigen::MatrixXd U, Eigen::VectorXd noise,
                                const Eigen::VectorXd& w_o, double sigma_u = 1.0,
                                double sigma_v = 0.0);

/// Draws `samples` regressor rows (row-major, N(0, sigma_u^2) entries) and
/// then `samples` noise values (N(0, sigma_v^2)) from `rng`.
SensorStream gen_sensor_stream(const GroundTruth& truth, int node, Eigen::Index samples,
                               double sigma_u, double sigma_v, Rng& rng);

}  // namespace diffunet
