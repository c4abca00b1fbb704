#pragma once

namespace diffunet {

// Smooth odd sigmoid S(x) = (1 - e^{-x}) / (1 + e^{-x}) standing in for sign(x),
// with its derivatives. All functions evaluate through e^{-|x|} and odd/even
// symmetry, so no intermediate overflows for any finite x.

double s(double x);

/// S'(x) = 2 e^{-x} / (1 + e^{-x})^2. Positive, underflows to 0 for |x| > ~745.
double s_prime(double x);

/// S''(x) = 2 e^{-x} (e^{-x} - 1) / (1 + e^{-x})^3.
double s_double_prime(double x);

/// -(d - S(x)) S''(x) + S'(x)^2, the per-sample factor of the diagonal
/// second derivative of the squared-residual data term. Throws
/// InvalidParameter unless d is -1 or +1.
double convexity_bracket(double d, double x);

struct SurrogateEval {
  double x = 0.0;
  double s = 0.0;
  double s_prime = 0.0;
  double s_double_prime = 0.0;
};

SurrogateEval evaluate_surrogate(double x);

}  // namespace diffunet
