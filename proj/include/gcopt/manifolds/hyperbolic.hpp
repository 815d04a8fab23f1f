#pragma once

#include <string>

#include "gcopt/error.hpp"
#include "gcopt/rng.hpp"
#include "gcopt/types.hpp"

namespace gcopt {

/// Hyperbolic space of constant curvature kappa < 0 in the hyperboloid
/// (Minkowski) model: points live on the upper sheet of
///   <x,x>_M = 1/kappa,  x_0 > 0,
/// with <x,y>_M = -x_0 y_0 + sum_i x_i y_i. Tangent vectors at x are the
/// Minkowski-orthogonal complement of x, and the Riemannian metric is the
/// (positive definite) restriction of <.,.>_M.
///
/// The Lorentz quadratic forms behind distance/log/exp cancel catastrophically
/// for nearby points, so they are evaluated in compensated (double-double)
/// arithmetic; see lorentz_dot().
class HyperbolicManifold {
 public:
  using Point = Vector;  // ambient coordinates, size dim+1
  struct Tangent {
    Point base;
    Vector v;
  };

  HyperbolicManifold(Index dim, double kappa);

  Index dim() const { return dim_; }
  double kappa_lower() const { return kappa_; }
  std::string name() const;

  /// Compensated Minkowski inner product of ambient vectors.
  double lorentz_dot(const Vector& a, const Vector& b) const;

  /// Rescales an ambient vector (with positive time component) onto the sheet.
  Point project(const Vector& ambient) const;

  /// Minkowski-orthogonal projection onto the tangent space at x.
  Tangent project_tangent(const Point& x, const Vector& ambient) const;

  void check_point(const Point& x) const;
  void check_base(const Point& x, const Tangent& t) const;

  double distance(const Point& x, const Point& y) const;
  Point exp(const Point& x, const Tangent& t) const;
  Tangent log(const Point& x, const Point& y) const;
  Tangent transport(const Point& x, const Point& y, const Tangent& t) const;
  double inner(const Point& x, const Tangent& u, const Tangent& w) const;
  double norm(const Point& x, const Tangent& t) const;

  Tangent zero_tangent(const Point& x) const { return Tangent{x, Vector::Zero(dim_ + 1)}; }
  Tangent scale(const Tangent& t, double a) const { return Tangent{t.base, a * t.v}; }
  Tangent add(const Tangent& t, const Tangent& u) const;

  /// Pole (1/sqrt|kappa|, 0, ..., 0).
  Point origin() const;
  Tangent random_unit_tangent(const Point& x, Rng& rng) const;
  Point random_point(Rng& rng, double radius) const;

 private:
  // squared Minkowski norm of x - y (exact chord form; >= 0 on the sheet)
  double chord_sq(const Point& x, const Point& y) const;

  Index dim_;
  double kappa_;
  double sqrt_abs_kappa_;
};

} // namespace gcopt
