#include "gcopt/manifolds/spd.hpp"

#include <cmath>

namespace gcopt {
namespace {

constexpr double kEigenvalueFloor = 1e-14;
constexpr double kSymmetryTol = 1e-12;

Eigen::SelfAdjointEigenSolver<Matrix> eigh(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("spd: eigendecomposition failed", 0);
  return es;
}

// X^{1/2} and X^{-1/2} from a single decomposition
struct SqrtPair {
  Matrix xs, xm;
};

SqrtPair sqrt_pair(const Matrix& x) {
  auto es = eigh(x);
  const Index n = x.rows();
  Vector sq(n), isq(n);
  for (Index i = 0; i < n; ++i) {
    const double lam = es.eigenvalues()[i];
    if (lam <= kEigenvalueFloor)
      throw InvalidPointError("spd: point is not positive definite");
    sq[i] = std::sqrt(lam);
    isq[i] = 1.0 / sq[i];
  }
  const Matrix& u = es.eigenvectors();
  return SqrtPair{SpdManifold::sym(u * sq.asDiagonal() * u.transpose()),
                  SpdManifold::sym(u * isq.asDiagonal() * u.transpose())};
}

} // namespace

SpdManifold::SpdManifold(Index n, double kappa_lower) : n_(n), kappa_(kappa_lower) {
  if (n < 1) throw ConfigError("SpdManifold: n must be >= 1");
  if (kappa_lower > 0.0)
    throw ConfigError("SpdManifold: kappa_lower must be <= 0");
}

std::string SpdManifold::name() const {
  return "spd(" + std::to_string(n_) + ",kappa=" + std::to_string(kappa_) + ")";
}

Matrix SpdManifold::sym_power(const Matrix& m, double p, bool require_pd) {
  auto es = eigh(m);
  Vector lam = es.eigenvalues();
  for (Index i = 0; i < lam.size(); ++i) {
    if (require_pd && lam[i] <= kEigenvalueFloor)
      throw InvalidPointError("spd: eigenvalue below floor in matrix power");
    lam[i] = std::pow(lam[i], p);
  }
  return sym(es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose());
}

Matrix SpdManifold::sym_exp(const Matrix& m) {
  auto es = eigh(m);
  Vector lam = es.eigenvalues().array().exp();
  return sym(es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose());
}

Matrix SpdManifold::sym_log(const Matrix& m) {
  auto es = eigh(m);
  Vector lam = es.eigenvalues();
  for (Index i = 0; i < lam.size(); ++i) {
    if (lam[i] <= kEigenvalueFloor)
      throw InvalidPointError("spd: eigenvalue below floor in matrix log");
    lam[i] = std::log(lam[i]);
  }
  return sym(es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose());
}

void SpdManifold::check_point(const Point& x) const {
  // cheap structural check; positive definiteness is enforced by the
  // eigenvalue floor inside every operation that decomposes the point
  if (x.rows() != n_ || x.cols() != n_)
    throw ContractViolation("spd: point dimension mismatch");
  if ((x - x.transpose()).norm() > kSymmetryTol * (1.0 + x.norm()))
    throw InvalidPointError("spd: point is not symmetric");
}

void SpdManifold::validate_point(const Point& x) const {
  check_point(x);
  auto es = eigh(sym(x));
  if (es.eigenvalues().minCoeff() <= kEigenvalueFloor)
    throw InvalidPointError("spd: point is not positive definite");
}

void SpdManifold::check_base(const Point& x, const Tangent& t) const {
  if (t.base.rows() != x.rows() || t.base.cols() != x.cols() ||
      (t.base - x).norm() > 1e-9 * (1.0 + x.norm()))
    throw ContractViolation("spd: tangent based at a different point");
  if ((t.v - t.v.transpose()).norm() > kSymmetryTol * (1.0 + t.v.norm()))
    throw InvalidPointError("spd: tangent is not symmetric");
}

double SpdManifold::distance(const Point& x, const Point& y) const {
  check_point(x);
  check_point(y);
  const SqrtPair sp = sqrt_pair(x);
  const Matrix w = sym(sp.xm * y * sp.xm);
  auto es = eigh(w);
  double d2 = 0.0;
  for (Index i = 0; i < n_; ++i) {
    const double lam = es.eigenvalues()[i];
    if (lam <= kEigenvalueFloor)
      throw InvalidPointError("spd: eigenvalue below floor in distance");
    const double l = std::log(lam);
    d2 += l * l;
  }
  return std::sqrt(d2);
}

SpdManifold::Point SpdManifold::exp(const Point& x, const Tangent& t) const {
  check_base(x, t);
  const SqrtPair sp = sqrt_pair(x);
  const Matrix w = sym(sp.xm * t.v * sp.xm);
  return sym(sp.xs * sym_exp(w) * sp.xs);
}

SpdManifold::Tangent SpdManifold::log(const Point& x, const Point& y) const {
  check_point(x);
  check_point(y);
  const SqrtPair sp = sqrt_pair(x);
  const Matrix w = sym(sp.xm * y * sp.xm);
  return Tangent{x, sym(sp.xs * sym_log(w) * sp.xs)};
}

SpdManifold::Tangent SpdManifold::transport(const Point& x, const Point& y,
                                            const Tangent& t) const {
  check_base(x, t);
  check_point(y);
  const SqrtPair sp = sqrt_pair(x);
  const Matrix e = sp.xs * sym_power(sym(sp.xm * y * sp.xm), 0.5) * sp.xm;
  return Tangent{y, sym(e * t.v * e.transpose())}; // E = (Y X^{-1})^{1/2}
}

double SpdManifold::inner(const Point& x, const Tangent& u, const Tangent& w) const {
  check_base(x, u);
  check_base(x, w);
  const SqrtPair sp = sqrt_pair(x);
  const Matrix a = sym(sp.xm * u.v * sp.xm);
  const Matrix b = sym(sp.xm * w.v * sp.xm);
  return (a.cwiseProduct(b)).sum();
}

double SpdManifold::norm(const Point& x, const Tangent& t) const {
  check_base(x, t);
  const SqrtPair sp = sqrt_pair(x);
  return sym(sp.xm * t.v * sp.xm).norm();
}

SpdManifold::Tangent SpdManifold::add(const Tangent& t, const Tangent& u) const {
  if ((t.base - u.base).norm() > 1e-9 * (1.0 + t.base.norm()))
    throw ContractViolation("spd: adding tangents at different points");
  return Tangent{t.base, t.v + u.v};
}

SpdManifold::Tangent SpdManifold::random_unit_tangent(const Point& x, Rng& rng) const {
  check_point(x);
  const Matrix xs = sqrt_pair(x).xs;
  // gaussian in metric-orthonormal coordinates at x, then pushed to T_X
  Matrix g(n_, n_);
  for (Index i = 0; i < n_; ++i)
    for (Index j = 0; j < n_; ++j) g(i, j) = rng.normal();
  const Matrix w = sym(g);
  const double n = w.norm();
  if (n < 1e-12) return random_unit_tangent(x, rng);
  return Tangent{x, sym(xs * (w / n) * xs)};
}

SpdManifold::Point SpdManifold::random_point(Rng& rng, double radius) const {
  Tangent u = random_unit_tangent(origin(), rng);
  return exp(origin(), scale(u, radius * rng.uniform()));
}

} // namespace gcopt
