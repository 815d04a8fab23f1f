#include <doctest.h>

#include <cmath>

#include "gcopt/manifolds/average.hpp"
#include "gcopt/manifolds/euclidean.hpp"
#include "gcopt/manifolds/geodesic.hpp"
#include "gcopt/manifolds/hyperbolic.hpp"
#include "gcopt/manifolds/spd.hpp"

using namespace gcopt;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

} // namespace

TEST_CASE("euclidean operations reduce to vector arithmetic") {
  EuclideanManifold m(2);
  CHECK(m.kappa_lower() == 0.0);

  const Vector x = vec2(0, 0), y = vec2(3, 4);
  CHECK(m.distance(x, y) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(m.distance(x, x) == 0.0);

  const auto v = m.make_tangent(x, vec2(1.5, -2.0));
  CHECK((m.exp(x, v) - (x + v.v)).norm() == 0.0); // bitwise flat case
  const auto back = m.log(x, y);
  CHECK((back.v - (y - x)).norm() == 0.0);

  const auto moved = m.transport(x, y, v);
  CHECK((moved.v - v.v).norm() == 0.0);
  CHECK((moved.base - y).norm() == 0.0);

  const auto w = m.make_tangent(x, vec2(2.0, 1.0));
  CHECK(m.inner(x, v, w) == doctest::Approx(v.v.dot(w.v)).epsilon(1e-15));
  CHECK(m.inner(x, v, v) >= 0.0);
  CHECK(m.inner(x, m.zero_tangent(x), m.zero_tangent(x)) == 0.0);
}

TEST_CASE("contract violations are reported") {
  EuclideanManifold m(2);
  EuclideanManifold m3(3);
  const Vector x = vec2(0, 0);
  CHECK_THROWS_AS(m.distance(x, Vector::Zero(3)), ContractViolation);
  const auto v = m.make_tangent(vec2(5, 5), vec2(1, 0));
  CHECK_THROWS_AS(m.exp(x, v), ContractViolation);
  CHECK_THROWS_AS((void)m3.make_tangent(Vector::Zero(3), vec2(1, 0)),
                  ContractViolation);
}

TEST_CASE("geometry constructors enforce the curvature sign") {
  CHECK_THROWS_AS(HyperbolicManifold(3, 0.0), ConfigError);
  CHECK_THROWS_AS(HyperbolicManifold(3, 0.5), ConfigError);
  CHECK_THROWS_AS(SpdManifold(3, 0.5), ConfigError);
  CHECK(HyperbolicManifold(3, -1.5).kappa_lower() == -1.5);
  CHECK(SpdManifold(3).kappa_lower() == -0.5);
}

TEST_CASE("hyperbolic log/exp round trip recovers tangents") {
  // 1e4 random (x, v) pairs with ||v|| <= 5, recovery to 1e-8
  for (double kappa : {-1.0, -0.25}) {
    HyperbolicManifold m(3, kappa);
    Rng rng(11);
    double worst = 0.0, worst_norm = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const auto x = m.random_point(rng, 2.0);
      auto v = m.random_unit_tangent(x, rng);
      v = m.scale(v, rng.uniform(0.0, 5.0));
      const auto y = m.exp(x, v);
      const auto back = m.log(x, y);
      worst = std::max(worst, (back.v - v.v).norm());
      worst_norm = std::max(worst_norm, std::abs(m.norm(x, back) - m.distance(x, y)) /
                                            (1.0 + m.distance(x, y)));
    }
    CHECK(worst < 1e-8);
    CHECK(worst_norm < 1e-8); // ||log|| agrees with distance
  }
}

TEST_CASE("hyperbolic round trip distance identity") {
  HyperbolicManifold m(4, -1.0);
  Rng rng(3);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto x = m.random_point(rng, 2.0);
    const auto y = m.random_point(rng, 3.0);
    const double d = m.distance(x, y);
    const auto mid = m.exp(x, m.log(x, y));
    worst = std::max(worst, m.distance(mid, y) / (1.0 + d));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("hyperbolic parallel transport is an isometry") {
  HyperbolicManifold m(3, -1.0);
  Rng rng(17);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto x = m.random_point(rng, 2.0);
    const auto y = m.random_point(rng, 2.0);
    auto u = m.random_unit_tangent(x, rng);
    u = m.scale(u, rng.uniform(0.0, 5.0));
    auto v = m.random_unit_tangent(x, rng);
    v = m.scale(v, rng.uniform(0.0, 5.0));
    const auto gu = m.transport(x, y, u);
    const auto gv = m.transport(x, y, v);
    worst = std::max(worst, std::abs(m.inner(x, u, v) - m.inner(y, gu, gv)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("hyperbolic identities at coincident points") {
  HyperbolicManifold m(3, -1.0);
  Rng rng(5);
  const auto x = m.random_point(rng, 2.0);
  CHECK(m.distance(x, x) == 0.0);
  CHECK(m.norm(x, m.log(x, x)) == 0.0);
  CHECK((m.exp(x, m.zero_tangent(x)) - x).norm() == 0.0);
  auto v = m.scale(m.random_unit_tangent(x, rng), 0.7);
  const auto same = m.transport(x, x, v);
  CHECK((same.v - v.v).norm() < 1e-12);
}

TEST_CASE("hyperboloid constraint survives long op chains") {
  HyperbolicManifold m(3, -1.0);
  Rng rng(29);
  auto x = m.random_point(rng, 1.0);
  auto v = m.scale(m.random_unit_tangent(x, rng), 0.3);
  for (int i = 0; i < 1000; ++i) {
    const auto y = m.exp(x, v);
    v = m.transport(x, y, v);
    x = y;
    // keep the walk in a bounded region
    if (m.distance(m.origin(), x) > 5.0) v = m.scale(v, -1.0);
  }
  const double residual = std::abs(-1.0 * m.lorentz_dot(x, x) - 1.0);
  CHECK(residual < 1e-8 * (1.0 + x.squaredNorm()));
  // tangent stayed Minkowski-orthogonal to its base
  CHECK(std::abs(m.lorentz_dot(x, v.v)) < 1e-8 * (1.0 + x.squaredNorm()));
}

TEST_CASE("spd distance matches the log-Frobenius closed form") {
  SpdManifold m(2);
  const Matrix eye = Matrix::Identity(2, 2);
  Matrix y = Matrix::Zero(2, 2);
  y(0, 0) = y(1, 1) = std::exp(1.0);
  CHECK(m.distance(eye, y) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(m.distance(eye, eye) == 0.0);
}

TEST_CASE("spd exponential reduces to scalar exponentials in the diagonal case") {
  SpdManifold m(3);
  Vector xd(3), vd(3);
  xd << 0.5, 1.0, 2.5;
  vd << -0.3, 0.8, 1.2;
  const Matrix x = xd.asDiagonal();
  const auto v = SpdManifold::Tangent{x, Matrix(vd.asDiagonal())};
  const Matrix y = m.exp(x, v);
  for (Index i = 0; i < 3; ++i)
    CHECK(y(i, i) == doctest::Approx(xd[i] * std::exp(vd[i] / xd[i])).epsilon(1e-12));
  CHECK(y.norm() == doctest::Approx(y.diagonal().norm()).epsilon(1e-12));
}

TEST_CASE("spd validity checks") {
  SpdManifold m(2);
  Matrix bad(2, 2);
  bad << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(m.validate_point(bad), InvalidPointError);
  CHECK_THROWS_AS(m.distance(Matrix::Identity(2, 2), bad), InvalidPointError);
  Matrix asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(m.check_point(asym), InvalidPointError);
  CHECK_THROWS_AS(m.distance(Matrix::Identity(3, 3), Matrix::Identity(3, 3)),
                  ContractViolation);
}

TEST_CASE("spd inner product reduces to Frobenius at the identity") {
  SpdManifold m(4);
  Rng rng(44);
  const Matrix eye = Matrix::Identity(4, 4);
  for (int i = 0; i < 50; ++i) {
    const auto u = m.random_unit_tangent(eye, rng);
    const auto v = m.scale(m.random_unit_tangent(eye, rng), rng.uniform(0.0, 3.0));
    CHECK(m.inner(eye, u, v) ==
          doctest::Approx((u.v.cwiseProduct(v.v)).sum()).epsilon(1e-12));
  }
}

TEST_CASE("spd round trip, transport isometry and symmetry maintenance") {
  SpdManifold m(4);
  Rng rng(23);
  double worst_rt = 0.0, worst_iso = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const auto x = m.random_point(rng, 2.0);
    auto v = m.scale(m.random_unit_tangent(x, rng), rng.uniform(0.0, 2.0));
    const auto y = m.exp(x, v);
    const auto back = m.log(x, y);
    worst_rt = std::max(worst_rt, (back.v - v.v).norm() / (1.0 + v.v.norm()));
    auto u = m.random_unit_tangent(x, rng);
    const auto gu = m.transport(x, y, u);
    const auto gv = m.transport(x, y, v);
    worst_iso = std::max(worst_iso, std::abs(m.inner(x, u, v) - m.inner(y, gu, gv)));
  }
  CHECK(worst_rt < 1e-8);
  CHECK(worst_iso < 1e-9);

  // chain of 1000 updates keeps points numerically symmetric
  auto x = m.random_point(rng, 1.0);
  double worst_asym = 0.0;
  for (int i = 0; i < 1000; ++i) {
    auto step = m.scale(m.random_unit_tangent(x, rng), 0.05);
    x = m.exp(x, step);
    worst_asym = std::max(worst_asym, (x - x.transpose()).norm());
    if (m.distance(m.origin(), x) > 4.0) x = m.origin();
  }
  CHECK(worst_asym < 1e-9);
}

TEST_CASE("average_step endpoints and flat running mean") {
  EuclideanManifold m(3);
  Rng rng(31);
  const auto a = m.random_point(rng, 2.0);
  const auto b = m.random_point(rng, 2.0);
  CHECK((average_step(m, a, b, 0.0) - a).norm() == 0.0);
  CHECK((average_step(m, a, b, 1.0) - b).norm() == 0.0);
  CHECK_THROWS_AS(average_step(m, a, b, -0.1), ContractViolation);
  CHECK_THROWS_AS(average_step(m, a, b, 1.5), ContractViolation);

  // streaming weights 1/(s+1) reproduce the arithmetic mean exactly
  std::vector<Vector> points;
  for (int i = 0; i < 50; ++i) points.push_back(m.random_point(rng, 3.0));
  Vector xbar = points[0];
  Vector direct = points[0];
  for (std::size_t s = 1; s < points.size(); ++s) {
    xbar = average_step(m, xbar, points[s], 1.0 / static_cast<double>(s + 1));
    direct += points[s];
  }
  direct /= static_cast<double>(points.size());
  CHECK((xbar - direct).norm() < 1e-12);
}

TEST_CASE("geodesic segments connect their endpoints") {
  HyperbolicManifold h(3, -1.0);
  Rng rng(41);
  const auto a = h.random_point(rng, 2.0);
  const auto b = h.random_point(rng, 2.0);
  const auto seg = make_geodesic_segment(h, a, b);
  CHECK(h.distance(h.exp(seg.start, seg.initial_velocity), b) < 1e-9);
  CHECK(segment_length(h, seg) == doctest::Approx(h.distance(a, b)).epsilon(1e-10));
  CHECK(h.distance(segment_point(h, seg, 0.0), a) < 1e-12);
  CHECK(h.distance(segment_point(h, seg, 1.0), b) < 1e-9);
  const auto mid = segment_point(h, seg, 0.5);
  CHECK(h.distance(a, mid) == doctest::Approx(0.5 * h.distance(a, b)).epsilon(1e-9));

  SpdManifold s(3);
  const auto sa = s.random_point(rng, 1.5);
  const auto sb = s.random_point(rng, 1.5);
  const auto sseg = make_geodesic_segment(s, sa, sb);
  CHECK(s.distance(s.exp(sseg.start, sseg.initial_velocity), sb) < 1e-9);
  CHECK(segment_length(s, sseg) == doctest::Approx(s.distance(sa, sb)).epsilon(1e-10));
}

TEST_CASE("hyperbolic average_step midpoint is equidistant") {
  HyperbolicManifold m(3, -1.0);
  Rng rng(13);
  const auto a = m.random_point(rng, 2.0);
  const auto b = m.random_point(rng, 2.0);
  const auto mid = average_step(m, a, b, 0.5);
  CHECK(m.distance(a, mid) == doctest::Approx(m.distance(mid, b)).epsilon(1e-9));
  CHECK(m.distance(a, mid) + m.distance(mid, b) ==
        doctest::Approx(m.distance(a, b)).epsilon(1e-9));
}
