#include "diffunet/signal_model.hpp"

#include <cmath>
#include <string>

#include "diffunet/error.hpp"

namespace diffunet {

GroundTruth gen_sparse_vector(Eigen::Index dim, double p, double sigma_w, Rng& rng) {
  if (dim < 1) throw InvalidParameter("sparse vector length must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("activity probability must lie in (0, 1)");
  if (!(sigma_w > 0.0) || !std::isfinite(sigma_w))
    throw InvalidParameter("active coefficient stddev must be positive");

  GroundTruth truth;
  truth.p = p;
  truth.sigma_w = sigma_w;
  truth.w = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index m = 0; m < dim; ++m) {
    if (rng.uniform() < p) truth.w[m] = rng.gaussian(0.0, sigma_w);
  }
  return truth;
}

SensorStream make_sensor_stream(int node, Eigen::MatrixXd U, Eigen::VectorXd noise,
                                const Eigen::VectorXd& w_o, double sigma_u, double sigma_v) {
  if (U.cols() != w_o.size())
    throw DimensionMismatch("regressor width " + std::to_string(U.cols()) +
                            " does not match vector length " + std::to_string(w_o.size()));
  if (noise.size() != U.rows())
    throw DimensionMismatch("noise length does not match the number of samples");

  SensorStream s;
  s.node = node;
  s.sigma_u = sigma_u;
  s.sigma_v = sigma_v;
  s.y = U * w_o + noise;
  s.d = s.y.unaryExpr([](double v) { return binary_sign(v); });
  s.U = std::move(U);
  s.noise = std::move(noise);
  return s;
}

SensorStream gen_sensor_stream(const GroundTruth& truth, int node, Eigen::Index samples,
                               double sigma_u, double sigma_v, Rng& rng) {
  if (samples < 1) throw InvalidParameter("sample count must be >= 1");
  if (!(sigma_u > 0.0)) throw InvalidParameter("regressor stddev must be positive");
  if (!(sigma_v >= 0.0)) throw InvalidParameter("noise stddev must be nonnegative");

  const Eigen::Index dim = truth.size();
  Eigen::MatrixXd U(samples, dim);
  for (Eigen::Index i = 0; i < samples; ++i)
    for (Eigen::Index m = 0; m < dim; ++m) U(i, m) = rng.gaussian(0.0, sigma_u);
  Eigen::VectorXd noise(samples);
  for (Eigen::Index i = 0; i < samples; ++i) noise[i] = rng.gaussian(0.0, sigma_v);
  return make_sensor_stream(node, std::move(U), std::move(noise), truth.w, sigma_u, sigma_v);
}

}  // namespace diffunet
