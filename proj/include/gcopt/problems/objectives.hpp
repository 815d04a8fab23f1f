#pragma once

#include <memory>

#include "gcopt/manifolds/euclidean.hpp"
#include "gcopt/manifolds/hyperbolic.hpp"
#include "gcopt/solvers.hpp"

namespace gcopt {

/// Nonsmooth 1-Lipschitz test objective f(x) = d(x, p). The subgradient is
/// the unit vector -Log_x(p)/d(x,p) away from the minimizer and the zero
/// tangent at p itself (valid there since p is the minimizer).
template <class M>
FirstOrderOracle<M> distance_objective(const M& m, const typename M::Point& center) {
  auto mp = std::make_shared<M>(m);
  auto cp = std::make_shared<typename M::Point>(center);
  FirstOrderOracle<M> oracle;
  oracle.objective = [mp, cp](const typename M::Point& x) { return mp->distance(x, *cp); };
  oracle.gradient = [mp, cp](const typename M::Point& x, Rng&) {
    const double d = mp->distance(x, *cp);
    if (d < 1e-14) return mp->zero_tangent(x);
    return mp->scale(mp->log(x, *cp), -1.0 / d);
  };
  oracle.deterministic = true;
  oracle.constants.L_f = 1.0;
  return oracle;
}

/// Adds zero-mean spherical noise of exact second moment sigma^2 to a
/// gradient oracle: g~ = g + sigma * u with u uniform on the unit sphere of
/// the tangent space, so E[g~] = g and E||g~ - g||^2 = sigma^2.
template <class M>
FirstOrderOracle<M> with_spherical_noise(const M& m, FirstOrderOracle<M> base,
                                         double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("with_spherical_noise: sigma must be positive");
  auto mp = std::make_shared<M>(m);
  auto inner_gradient = base.gradient;
  base.gradient = [mp, inner_gradient, sigma](const typename M::Point& x, Rng& rng) {
    auto g = inner_gradient(x, rng);
    const auto u = mp->random_unit_tangent(x, rng);
    return mp->add(g, mp->scale(u, sigma));
  };
  base.deterministic = false;
  base.constants.sigma = sigma;
  return base;
}

/// Flat quadratic sanity objective f(x) = ||x||^2 / 2, gradient x
/// (L_g = mu = 1): gradient descent with eta = 1 lands on the minimizer in
/// one step.
inline FirstOrderOracle<EuclideanManifold> euclidean_quadratic(Index dim) {
  FirstOrderOracle<EuclideanManifold> oracle;
  oracle.objective = [dim](const Vector& x) {
    if (x.size() != dim) throw ContractViolation("euclidean_quadratic: dim mismatch");
    return 0.5 * x.squaredNorm();
  };
  oracle.gradient = [](const Vector& x, Rng&) {
    return EuclideanManifold::Tangent{x, x};
  };
  oracle.deterministic = true;
  oracle.constants.L_g = 1.0;
  oracle.constants.mu = 1.0;
  return oracle;
}

} // namespace gcopt
