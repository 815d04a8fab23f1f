#include "gcopt/problems/frechet.hpp"

#include <memory>

namespace gcopt {

FrechetProblem make_frechet_problem(Index dim, double kappa, Index n_anchors,
                                    double ball_radius, std::uint64_t seed) {
  if (n_anchors < 1) throw ConfigError("make_frechet_problem: need at least one anchor");
  HyperbolicManifold m(dim, kappa);
  Rng rng(seed);
  const auto center = m.random_point(rng, 1.0);
  std::vector<Vector> anchors;
  anchors.reserve(n_anchors);
  for (Index i = 0; i < n_anchors; ++i) {
    const auto u = m.random_unit_tangent(center, rng);
    anchors.push_back(m.exp(center, m.scale(u, rng.uniform(0.0, ball_radius))));
  }
  return FrechetProblem{std::move(m), std::move(anchors)};
}

double frechet_loss(const FrechetProblem& p, const Vector& x) {
  double total = 0.0;
  for (const auto& a : p.anchors) {
    const double d = p.manifold.distance(x, a);
    total += d * d;
  }
  return total / static_cast<double>(p.anchors.size());
}

HyperbolicManifold::Tangent frechet_gradient(const FrechetProblem& p, const Vector& x) {
  auto g = p.manifold.zero_tangent(x);
  for (const auto& a : p.anchors) g = p.manifold.add(g, p.manifold.log(x, a));
  return p.manifold.scale(g, -2.0 / static_cast<double>(p.anchors.size()));
}

FirstOrderOracle<HyperbolicManifold> frechet_oracle(const FrechetProblem& p) {
  auto shared = std::make_shared<FrechetProblem>(p);
  FirstOrderOracle<HyperbolicManifold> oracle;
  oracle.objective = [shared](const Vector& x) { return frechet_loss(*shared, x); };
  oracle.gradient = [shared](const Vector& x, Rng&) {
    return frechet_gradient(*shared, x);
  };
  oracle.deterministic = true;
  oracle.constants.mu = 2.0;
  return oracle;
}

FirstOrderOracle<HyperbolicManifold> frechet_anchor_sgd_oracle(const FrechetProblem& p) {
  auto shared = std::make_shared<FrechetProblem>(p);
  FirstOrderOracle<HyperbolicManifold> oracle;
  oracle.objective = [shared](const Vector& x) { return frechet_loss(*shared, x); };
  oracle.gradient = [shared](const Vector& x, Rng& rng) {
    const long i = rng.uniform_int(static_cast<long>(shared->anchors.size()));
    return shared->manifold.scale(shared->manifold.log(x, shared->anchors[i]), -2.0);
  };
  oracle.deterministic = false;
  oracle.constants.mu = 2.0;
  return oracle;
}

} // namespace gcopt
