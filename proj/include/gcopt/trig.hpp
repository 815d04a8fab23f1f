#pragma once

#include "gcopt/error.hpp"
#include "gcopt/types.hpp"

namespace gcopt {

/// Side lengths of a geodesic triangle together with the angle between sides
/// b and c and the curvature context it was sampled in.
struct GeodesicTriangle {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double angle_A = 0.0; // in [0, pi]
  double kappa = 0.0;   // <= 0
};

/// Curvature distortion factor
///   zeta(kappa, c) = sqrt(|kappa|) c / tanh(sqrt(|kappa|) c) >= 1,
/// continuously extended to 1 at kappa = 0 or c = 0. Small arguments use a
/// Taylor series of x/tanh(x) to avoid the 0/0 cancellation.
double zeta(double kappa, double c);

/// zeta bundled with the diameter it was evaluated at.
struct ZetaContext {
  double kappa;
  double diameter_D;
  double value; // zeta(kappa, diameter_D)

  ZetaContext(double kappa_in, double diameter_in)
      : kappa(kappa_in), diameter_D(diameter_in), value(zeta(kappa_in, diameter_in)) {
    if (!(diameter_in > 0.0)) throw DomainError("ZetaContext: diameter must be positive");
  }
};

/// Euclidean law of cosines: a = sqrt(b^2 + c^2 - 2 b c cos A).
double law_of_cosines_flat(double b, double c, double A);

/// Side a of a geodesic triangle in hyperbolic space of curvature kappa < 0,
/// from cosh(sk a) = cosh(sk b) cosh(sk c) - sinh(sk b) sinh(sk c) cos A with
/// sk = sqrt(|kappa|). Evaluated in the cancellation-free form
///   cosh(sk a) - 1 = 2 sinh^2(sk (b-c)/2) + 2 sinh(sk b) sinh(sk c) sin^2(A/2)
/// so the collinear cases (A = 0, b = c) stay exact.
double hyperbolic_side(double b, double c, double A, double kappa);

/// Right-hand side of the trigonometric distance bound:
///   zeta(kappa, c) b^2 + c^2 - 2 b c cos A.
/// For kappa <= 0 this upper-bounds the squared opposite side a^2 of any
/// geodesic triangle whose curvature is lower-bounded by kappa.
double lemma1_upper_bound(double b, double c, double A, double kappa);

} // namespace gcopt
