#include "diffunet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diffunet/error.hpp"

namespace diffunet {

double squared_deviation(const Eigen::Ref<const Eigen::VectorXd>& w,
                         const Eigen::Ref<const Eigen::VectorXd>& w_o) {
  if (w.size() != w_o.size())
    throw DimensionMismatch("estimate length " + std::to_string(w.size()) +
                            " differs from ground truth length " + std::to_string(w_o.size()));
  return (w - w_o).squaredNorm();
}

double sq_dev_to_db(double sq_dev) {
  if (std::isnan(sq_dev)) return sq_dev;
  if (sq_dev <= 0.0) return kMsdFloorDb;
  return std::max(kMsdFloorDb, 10.0 * std::log10(sq_dev));
}

double msd_db(const Eigen::Ref<const Eigen::VectorXd>& w, const Eigen::Ref<const Eigen::VectorXd>& w_o) {
  return sq_dev_to_db(squared_deviation(w, w_o));
}

}  // namespace diffunet
