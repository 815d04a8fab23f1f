#pragma once

#include <string>

#include "gcopt/error.hpp"
#include "gcopt/rng.hpp"
#include "gcopt/types.hpp"

namespace gcopt {

/// Symmetric positive definite matrices with the affine-invariant metric
///   <U,V>_X = tr(X^{-1} U X^{-1} V),
///   d(X,Y)  = ||log(X^{-1/2} Y X^{-1/2})||_F.
/// Closed forms:
///   Exp_X(V)   = X^{1/2} expm(X^{-1/2} V X^{-1/2}) X^{1/2}
///   Log_X(Y)   = X^{1/2} logm(X^{-1/2} Y X^{-1/2}) X^{1/2}
///   transport  = E V E^T with E = (Y X^{-1})^{1/2}
/// Matrix functions go through symmetric eigendecompositions; an eigenvalue
/// at or below the floor 1e-14 raises InvalidPointError instead of being
/// clamped. Outputs are re-symmetrized as (M + M^T)/2.
///
/// The sectional curvature of this geometry lies in [-1/2, 0]; the lower
/// bound used by step sizes and zeta is a configuration input (default -1/2).
class SpdManifold {
 public:
  using Point = Matrix;
  struct Tangent {
    Point base;
    Matrix v;
  };

  explicit SpdManifold(Index n, double kappa_lower = -0.5);

  Index dim() const { return n_; } // matrix side length
  double kappa_lower() const { return kappa_; }
  std::string name() const;

  /// Structural check (dimensions, symmetry); cheap enough for hot paths.
  void check_point(const Point& x) const;
  /// Full validity check including positive definiteness.
  void validate_point(const Point& x) const;
  void check_base(const Point& x, const Tangent& t) const;

  double distance(const Point& x, const Point& y) const;
  Point exp(const Point& x, const Tangent& t) const;
  Tangent log(const Point& x, const Point& y) const;
  Tangent transport(const Point& x, const Point& y, const Tangent& t) const;
  double inner(const Point& x, const Tangent& u, const Tangent& w) const;
  double norm(const Point& x, const Tangent& t) const;

  Tangent zero_tangent(const Point& x) const { return Tangent{x, Matrix::Zero(n_, n_)}; }
  Tangent scale(const Tangent& t, double a) const { return Tangent{t.base, a * t.v}; }
  Tangent add(const Tangent& t, const Tangent& u) const;

  Point origin() const { return Matrix::Identity(n_, n_); }
  Tangent random_unit_tangent(const Point& x, Rng& rng) const;
  Point random_point(Rng& rng, double radius) const;

  static Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

  /// Symmetric matrix power via eigendecomposition (p = 0.5 gives the
  /// principal square root). Throws InvalidPointError below the floor
  /// when require_pd is set.
  static Matrix sym_power(const Matrix& m, double p, bool require_pd = true);
  static Matrix sym_exp(const Matrix& m);
  static Matrix sym_log(const Matrix& m); // requires PD input

 private:
  Index n_;
  double kappa_;
};

} // namespace gcopt
