#pragma once

#include <cmath>
#include <string>

#include "gcopt/error.hpp"
#include "gcopt/rng.hpp"
#include "gcopt/types.hpp"

namespace gcopt {

/// Flat reference geometry (kappa = 0). Every operation reduces to plain
/// vector arithmetic, which makes this the oracle geometry for solver and
/// trig-bound equality tests.
class EuclideanManifold {
 public:
  using Point = Vector;
  struct Tangent {
    Point base;
    Vector v;
  };

  explicit EuclideanManifold(Index dim) : dim_(dim) {
    if (dim < 1) throw ConfigError("EuclideanManifold: dim must be >= 1");
  }

  Index dim() const { return dim_; }
  double kappa_lower() const { return 0.0; }
  std::string name() const { return "euclidean(" + std::to_string(dim_) + ")"; }

  void check_point(const Point& x) const {
    if (x.size() != dim_)
      throw ContractViolation("euclidean: point dimension mismatch");
  }

  void check_base(const Point& x, const Tangent& t) const {
    if (t.base.size() != x.size() || (t.base - x).norm() > base_tol(x))
      throw ContractViolation("euclidean: tangent based at a different point");
  }

  double distance(const Point& x, const Point& y) const {
    check_point(x);
    check_point(y);
    return (x - y).norm();
  }

  Point exp(const Point& x, const Tangent& t) const {
    check_base(x, t);
    return x + t.v;
  }

  Tangent log(const Point& x, const Point& y) const {
    check_point(x);
    check_point(y);
    return Tangent{x, y - x};
  }

  Tangent transport(const Point& x, const Point& y, const Tangent& t) const {
    check_base(x, t);
    check_point(y);
    return Tangent{y, t.v};
  }

  double inner(const Point& x, const Tangent& u, const Tangent& w) const {
    check_base(x, u);
    check_base(x, w);
    return u.v.dot(w.v);
  }

  double norm(const Point& x, const Tangent& t) const {
    check_base(x, t);
    return t.v.norm();
  }

  Tangent zero_tangent(const Point& x) const { return Tangent{x, Vector::Zero(dim_)}; }

  Tangent make_tangent(const Point& x, Vector components) const {
    check_point(x);
    if (components.size() != dim_)
      throw ContractViolation("euclidean: tangent dimension mismatch");
    return Tangent{x, std::move(components)};
  }

  Tangent scale(const Tangent& t, double a) const { return Tangent{t.base, a * t.v}; }

  Tangent add(const Tangent& t, const Tangent& u) const {
    if ((t.base - u.base).norm() > base_tol(t.base))
      throw ContractViolation("euclidean: adding tangents at different points");
    return Tangent{t.base, t.v + u.v};
  }

  Tangent random_unit_tangent(const Point& x, Rng& rng) const {
    Vector g(dim_);
    for (Index i = 0; i < dim_; ++i) g[i] = rng.normal();
    double n = g.norm();
    while (n < 1e-12) {
      for (Index i = 0; i < dim_; ++i) g[i] = rng.normal();
      n = g.norm();
    }
    return Tangent{x, g / n};
  }

  Point origin() const { return Vector::Zero(dim_); }

  Point random_point(Rng& rng, double radius) const {
    Tangent u = random_unit_tangent(origin(), rng);
    return radius * rng.uniform() * u.v;
  }

 private:
  static double base_tol(const Point& x) { return 1e-9 * (1.0 + x.norm()); }

  Index dim_;
};

} // namespace gcopt
