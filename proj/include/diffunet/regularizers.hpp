#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>

namespace diffunet {

enum class RegularizerKind { L1, WeightedL1, SmoothedL0 };

inline constexpr double kDefaultWeightedL1Eps = 1e-10;
inline constexpr double kDefaultSmoothedL0Sigma = 1e-3;

/// Sparsity-promoting penalty f(w). `eps` is set only for WeightedL1 and
/// `sigma` only for SmoothedL0; use the factories to build valid specs.
struct RegularizerSpec {
  RegularizerKind kind = RegularizerKind::L1;
  std::optional<double> eps;
  std::optional<double> sigma;

  static RegularizerSpec l1() { return {}; }
  static RegularizerSpec weighted_l1(double eps = kDefaultWeightedL1Eps);
  static RegularizerSpec smoothed_l0(double sigma = kDefaultSmoothedL0Sigma);

  /// Throws InvalidParameter when parameters are missing, extra, or nonpositive.
  void validate() const;

  /// Short name used in configs and CSV headers: l1, wl1, sl0.
  std::string name() const;
};

/// Parses `l1 | wl1 | sl0`, pulling the matching parameter when present.
RegularizerSpec parse_regularizer(std::string_view name, std::optional<double> eps = std::nullopt,
                                  std::optional<double> sigma = std::nullopt);

/// L1: sum |w_m|. WeightedL1: sum |w_m| / (eps + |w_m|).
/// SmoothedL0: sum 1 - exp(-w_m^2 / (2 sigma^2)).
double reg_value(const RegularizerSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& w);

/// Elementwise (sub)gradient; the L1 and WeightedL1 subgradients are 0 at w_m = 0.
Eigen::VectorXd reg_gradient(const RegularizerSpec& spec,
                             const Eigen::Ref<const Eigen::VectorXd>& w);

}  // namespace diffunet
