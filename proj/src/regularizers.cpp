#include "diffunet/regularizers.hpp"

#include <cmath>

#include "diffunet/error.hpp"

namespace diffunet {
namespace {

double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

bool positive_finite(const std::optional<double>& v) {
  return v && std::isfinite(*v) && *v > 0.0;
}

}  // namespace

RegularizerSpec RegularizerSpec::weighted_l1(double eps) {
  RegularizerSpec spec{RegularizerKind::WeightedL1, eps, std::nullopt};
  spec.validate();
  return spec;
}

RegularizerSpec RegularizerSpec::smoothed_l0(double sigma) {
  RegularizerSpec spec{RegularizerKind::SmoothedL0, std::nullopt, sigma};
  spec.validate();
  return spec;
}

void RegularizerSpec::validate() const {
  switch (kind) {
    case RegularizerKind::L1:
      if (eps || sigma) throw InvalidParameter("l1 takes no parameters");
      return;
    case RegularizerKind::WeightedL1:
      if (sigma) throw InvalidParameter("wl1 takes eps, not sigma");
      if (!positive_finite(eps)) throw InvalidParameter("wl1 requires eps > 0");
      return;
    case RegularizerKind::SmoothedL0:
      if (eps) throw InvalidParameter("sl0 takes sigma, not eps");
      if (!positive_finite(sigma)) throw InvalidParameter("sl0 requires sigma > 0");
      return;
  }
}

std::string RegularizerSpec::name() const {
  switch (kind) {
    case RegularizerKind::L1:
      return "l1";
    case RegularizerKind::WeightedL1:
      return "wl1";
    case RegularizerKind::SmoothedL0:
      return "sl0";
  }
  return "?";
}

RegularizerSpec parse_regularizer(std::string_view name, std::optional<double> eps,
                                  std::optional<double> sigma) {
  if (name == "l1") return RegularizerSpec::l1();
  if (name == "wl1") return RegularizerSpec::weighted_l1(eps.value_or(kDefaultWeightedL1Eps));
  if (name == "sl0") return RegularizerSpec::smoothed_l0(sigma.value_or(kDefaultSmoothedL0Sigma));
  throw InvalidParameter("unknown regularizer '" + std::string(name) + "' (expected l1, wl1 or sl0)");
}

double reg_value(const RegularizerSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& w) {
  spec.validate();
  double total = 0.0;
  switch (spec.kind) {
    case RegularizerKind::L1:
      for (double v : w) total += std::abs(v);
      break;
    case RegularizerKind::WeightedL1: {
      const double eps = *spec.eps;
      for (double v : w) total += std::abs(v) / (eps + std::abs(v));
      break;
    }
    case RegularizerKind::SmoothedL0: {
      const double two_s2 = 2.0 * *spec.sigma * *spec.sigma;
      for (double v : w) total += -std::expm1(-v * v / two_s2);
      break;
    }
  }
  return total;
}

Eigen::VectorXd reg_gradient(const RegularizerSpec& spec,
                             const Eigen::Ref<const Eigen::VectorXd>& w) {
  spec.validate();
  Eigen::VectorXd g(w.size());
  switch (spec.kind) {
    case RegularizerKind::L1:
      for (Eigen::Index m = 0; m < w.size(); ++m) g[m] = sign0(w[m]);
      break;
    case RegularizerKind::WeightedL1: {
      const double eps = *spec.eps;
      for (Eigen::Index m = 0; m < w.size(); ++m) {
        const double q = eps + std::abs(w[m]);
        g[m] = eps * sign0(w[m]) / (q * q);
      }
      break;
    }
    case RegularizerKind::SmoothedL0: {
      const double s2 = *spec.sigma * *spec.sigma;
      for (Eigen::Index m = 0; m < w.size(); ++m)
        g[m] = (w[m] / s2) * std::exp(-w[m] * w[m] / (2.0 * s2));
      break;
    }
  }
  return g;
}

}  // namespace diffunet
