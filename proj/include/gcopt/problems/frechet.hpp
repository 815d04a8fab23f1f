#pragma once

#include <cstdint>
#include <vector>

#include "gcopt/manifolds/hyperbolic.hpp"
#include "gcopt/solvers.hpp"

namespace gcopt {

/// Uniformly weighted Frechet-mean objective on hyperbolic space:
///   f(x) = (1/N) sum_i d^2(x, p_i),
/// geodesically 2-strongly convex for kappa <= 0. Serves as the certified
/// strongly-convex / smooth test problem for the bound suites.
struct FrechetProblem {
  HyperbolicManifold manifold;
  std::vector<Vector> anchors;
};

/// Anchors sampled inside the ball of radius `ball_radius` around a seeded
/// center point, so the anchor set has a known diameter bound.
FrechetProblem make_frechet_problem(Index dim, double kappa, Index n_anchors,
                                    double ball_radius, std::uint64_t seed);

double frechet_loss(const FrechetProblem& p, const Vector& x);
HyperbolicManifold::Tangent frechet_gradient(const FrechetProblem& p, const Vector& x);

/// Deterministic full-gradient oracle (constants filled by the caller).
FirstOrderOracle<HyperbolicManifold> frechet_oracle(const FrechetProblem& p);

/// Unbiased single-anchor oracle: gradient of one uniformly drawn squared
/// distance, -2 Log_x(p_i); the average over i equals the full gradient
/// exactly.
FirstOrderOracle<HyperbolicManifold> frechet_anchor_sgd_oracle(const FrechetProblem& p);

} // namespace gcopt
