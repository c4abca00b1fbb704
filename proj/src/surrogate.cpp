#include "diffunet/surrogate.hpp"

#include <cmath>

#include "diffunet/error.hpp"

namespace diffunet {

double s(double x) {
  const double e = std::exp(-std::abs(x));
  const double v = (1.0 - e) / (1.0 + e);
  return x < 0.0 ? -v : v;
}

double s_prime(double x) {
  const double e = std::exp(-std::abs(x));
  const double q = 1.0 + e;
  return 2.0 * e / (q * q);
}

double s_double_prime(double x) {
  const double e = std::exp(-std::abs(x));
  const double q = 1.0 + e;
  const double v = 2.0 * e * (e - 1.0) / (q * q * q);
  return x < 0.0 ? -v : v;
}

double convexity_bracket(double d, double x) {
  if (d != 1.0 && d != -1.0) throw InvalidParameter("binary observation must be -1 or +1");
  const double sp = s_prime(x);
  return -(d - s(x)) * s_double_prime(x) + sp * sp;
}

SurrogateEval evaluate_surrogate(double x) { return {x, s(x), s_prime(x), s_double_prime(x)}; }

}  // namespace diffunet
