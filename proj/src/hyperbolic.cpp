#include "gcopt/manifolds/hyperbolic.hpp"

#include <cmath>

namespace gcopt {
namespace {

struct TwoSum {
  double hi, lo;
};

inline TwoSum two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline TwoSum two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

// Compensated sum of signed products; the error term of every product and
// every addition is carried along, which keeps the result accurate even when
// the products cancel almost completely (the generic situation for Lorentz
// forms of points far from the pole).
inline double signed_product_sum(const Vector& a, const Vector& b, double sign0) {
  double sum = 0.0, comp = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    const double s = (i == 0) ? sign0 : 1.0;
    const TwoSum p = two_prod(s * a[i], b[i]);
    const TwoSum t = two_sum(sum, p.hi);
    sum = t.hi;
    comp += t.lo + p.lo;
  }
  return sum + comp;
}

inline double sinhc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

// acosh(1 + w) for w >= 0 without forming 1 + w.
inline double acosh1p(double w) {
  return std::log1p(w + std::sqrt(w * (w + 2.0)));
}

} // namespace

HyperbolicManifold::HyperbolicManifold(Index dim, double kappa)
    : dim_(dim), kappa_(kappa), sqrt_abs_kappa_(std::sqrt(-kappa)) {
  if (dim < 1) throw ConfigError("HyperbolicManifold: dim must be >= 1");
  if (!(kappa < 0.0))
    throw ConfigError("HyperbolicManifold: kappa must be strictly negative");
}

std::string HyperbolicManifold::name() const {
  return "hyperbolic(" + std::to_string(dim_) + ",kappa=" + std::to_string(kappa_) + ")";
}

double HyperbolicManifold::lorentz_dot(const Vector& a, const Vector& b) const {
  if (a.size() != dim_ + 1 || b.size() != dim_ + 1)
    throw ContractViolation("hyperbolic: ambient dimension mismatch");
  return signed_product_sum(a, b, -1.0);
}

HyperbolicManifold::Point HyperbolicManifold::project(const Vector& ambient) const {
  if (ambient.size() != dim_ + 1)
    throw ContractViolation("hyperbolic: ambient dimension mismatch");
  if (!(ambient[0] > 0.0))
    throw InvalidPointError("hyperbolic: time component must be positive");
  const double q = kappa_ * signed_product_sum(ambient, ambient, -1.0);
  if (!(q > 0.0))
    throw InvalidPointError("hyperbolic: vector is not timelike");
  return ambient / std::sqrt(q);
}

HyperbolicManifold::Tangent HyperbolicManifold::project_tangent(const Point& x,
                                                                const Vector& ambient) const {
  check_point(x);
  if (ambient.size() != dim_ + 1)
    throw ContractViolation("hyperbolic: ambient dimension mismatch");
  // v - kappa <x,v> x is Minkowski-orthogonal to x when <x,x> = 1/kappa
  const double xv = lorentz_dot(x, ambient);
  return Tangent{x, ambient - kappa_ * xv * x};
}

void HyperbolicManifold::check_point(const Point& x) const {
  if (x.size() != dim_ + 1)
    throw ContractViolation("hyperbolic: point dimension mismatch");
  if (!(x[0] > 0.0))
    throw InvalidPointError("hyperbolic: point not on the upper sheet");
  const double residual = std::abs(kappa_ * lorentz_dot(x, x) - 1.0);
  // tolerance scales with the coordinate magnitude: far from the pole the
  // constraint cannot be represented more accurately in doubles
  const double tol = 1e-10 * (1.0 + std::abs(kappa_) * x.squaredNorm());
  if (residual > tol)
    throw InvalidPointError("hyperbolic: point violates the sheet constraint");
}

void HyperbolicManifold::check_base(const Point& x, const Tangent& t) const {
  if (t.base.size() != x.size() || (t.base - x).norm() > 1e-9 * (1.0 + x.norm()))
    throw ContractViolation("hyperbolic: tangent based at a different point");
}

double HyperbolicManifold::chord_sq(const Point& x, const Point& y) const {
  const Vector d = x - y;
  const double m = signed_product_sum(d, d, -1.0);
  return m > 0.0 ? m : 0.0;
}

double HyperbolicManifold::distance(const Point& x, const Point& y) const {
  check_point(x);
  check_point(y);
  // cosh(sqrt|k| d) - 1 = |k| |x-y|_M^2 / 2, evaluated cancellation-free
  const double w = 0.5 * (-kappa_) * chord_sq(x, y);
  return acosh1p(w) / sqrt_abs_kappa_;
}

HyperbolicManifold::Point HyperbolicManifold::exp(const Point& x, const Tangent& t) const {
  check_base(x, t);
  const double n2 = signed_product_sum(t.v, t.v, -1.0);
  if (!(n2 > 0.0)) return x;
  const double theta = sqrt_abs_kappa_ * std::sqrt(n2);
  Vector y = std::cosh(theta) * x + sinhc(theta) * t.v;
  return project(y);
}

HyperbolicManifold::Tangent HyperbolicManifold::log(const Point& x, const Point& y) const {
  check_point(x);
  check_point(y);
  const double w = 0.5 * (-kappa_) * chord_sq(x, y); // = cosh(sqrt|k| d) - 1
  const double d = acosh1p(w) / sqrt_abs_kappa_;
  Vector dir = y - (1.0 + w) * x; // y minus its component along x
  const double dn2 = signed_product_sum(dir, dir, -1.0);
  if (!(dn2 > 0.0) || d == 0.0) return zero_tangent(x);
  Vector v = (d / std::sqrt(dn2)) * dir;
  return project_tangent(x, v);
}

HyperbolicManifold::Tangent HyperbolicManifold::transport(const Point& x, const Point& y,
                                                          const Tangent& t) const {
  check_base(x, t);
  check_point(y);
  const double w = 0.5 * (-kappa_) * chord_sq(x, y); // = u - 1 with u = kappa <x,y>
  const double yv = lorentz_dot(y, t.v);
  Vector carried = t.v + (-kappa_) * yv / (2.0 + w) * (x + y);
  return project_tangent(y, carried);
}

double HyperbolicManifold::inner(const Point& x, const Tangent& u, const Tangent& w) const {
  check_base(x, u);
  check_base(x, w);
  return lorentz_dot(u.v, w.v);
}

double HyperbolicManifold::norm(const Point& x, const Tangent& t) const {
  check_base(x, t);
  const double n2 = signed_product_sum(t.v, t.v, -1.0);
  return n2 > 0.0 ? std::sqrt(n2) : 0.0;
}

HyperbolicManifold::Tangent HyperbolicManifold::add(const Tangent& t, const Tangent& u) const {
  if ((t.base - u.base).norm() > 1e-9 * (1.0 + t.base.norm()))
    throw ContractViolation("hyperbolic: adding tangents at different points");
  return Tangent{t.base, t.v + u.v};
}

HyperbolicManifold::Point HyperbolicManifold::origin() const {
  Vector x = Vector::Zero(dim_ + 1);
  x[0] = 1.0 / sqrt_abs_kappa_;
  return x;
}

HyperbolicManifold::Tangent HyperbolicManifold::random_unit_tangent(const Point& x,
                                                                    Rng& rng) const {
  check_point(x);
  for (;;) {
    Vector g(dim_ + 1);
    for (Index i = 0; i < dim_ + 1; ++i) g[i] = rng.normal();
    Tangent t = project_tangent(x, g);
    const double n = norm(x, t);
    if (n > 1e-8) return Tangent{x, t.v / n};
  }
}

HyperbolicManifold::Point HyperbolicManifold::random_point(Rng& rng, double radius) const {
  Tangent u = random_unit_tangent(origin(), rng);
  return exp(origin(), scale(u, radius * rng.uniform()));
}

} // namespace gcopt
