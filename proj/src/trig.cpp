#include "gcopt/trig.hpp"

#include <cmath>

namespace gcopt {

double zeta(double kappa, double c) {
  if (kappa > 0.0) throw DomainError("zeta: kappa must be <= 0");
  if (c < 0.0) throw DomainError("zeta: c must be >= 0");
  if (!std::isfinite(kappa) || !std::isfinite(c))
    throw DomainError("zeta: non-finite argument");
  const double x = std::sqrt(-kappa) * c;
  if (x < 1e-4) {
    // x/tanh(x) = 1 + x^2/3 - x^4/45 + O(x^6)
    const double x2 = x * x;
    return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
  }
  return x / std::tanh(x);
}

double law_of_cosines_flat(double b, double c, double A) {
  if (!std::isfinite(b) || !std::isfinite(c) || !std::isfinite(A))
    throw DomainError("law_of_cosines_flat: non-finite argument");
  const double a2 = b * b + c * c - 2.0 * b * c * std::cos(A);
  return a2 > 0.0 ? std::sqrt(a2) : 0.0;
}

double hyperbolic_side(double b, double c, double A, double kappa) {
  if (!(kappa < 0.0))
    throw DomainError("hyperbolic_side: kappa must be strictly negative");
  if (!std::isfinite(b) || !std::isfinite(c) || !std::isfinite(A))
    throw DomainError("hyperbolic_side: non-finite argument");
  if (b < 0.0 || c < 0.0) throw DomainError("hyperbolic_side: sides must be >= 0");
  const double sk = std::sqrt(-kappa);
  const double half_gap = std::sinh(0.5 * sk * (b - c));
  const double half_angle = std::sin(0.5 * A);
  // w = cosh(sk a) - 1 as a sum of two nonnegative terms
  const double w = 2.0 * half_gap * half_gap +
                   2.0 * std::sinh(sk * b) * std::sinh(sk * c) * half_angle * half_angle;
  return std::log1p(w + std::sqrt(w * (w + 2.0))) / sk;
}

double lemma1_upper_bound(double b, double c, double A, double kappa) {
  const double z = zeta(kappa, c);
  return z * b * b + c * c - 2.0 * b * c * std::cos(A);
}

} // namespace gcopt
