#pragma once

#include <Eigen/Dense>

namespace diffunet {

/// dB value reported for an exact-zero deviation.
inline constexpr double kMsdFloorDb = -300.0;

/// ||w - w_o||^2. Throws DimensionMismatch on unequal lengths.
double squared_deviation(const Eigen::Ref<const Eigen::VectorXd>& w,
                         const Eigen::Ref<const Eigen::VectorXd>& w_o);

/// 10 log10 of a squared deviation, floored at kMsdFloorDb.
double sq_dev_to_db(double sq_dev);

/// 20 log10 ||w - w_o||_2, floored at kMsdFloorDb.
double msd_db(const Eigen::Ref<const Eigen::VectorXd>& w, const Eigen::Ref<const Eigen::VectorXd>& w_o);

}  // namespace diffunet
