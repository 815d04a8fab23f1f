#pragma once

#include <vector>

#include "gcopt/solvers.hpp"

namespace gcopt {

template <class M>
struct ReferenceResult {
  typename M::Point x;
  double f = 0.0;
  long iterations = 0;
  double grad_norm = 0.0;
  double multistart_spread = 0.0; // max pairwise distance between restart minimizers
};

/// High-accuracy reference optimum for smooth strongly g-convex problems:
/// fixed-step gradient descent from each starting point until
/// ||grad|| <= tol * (1 + |f|), keeping the best value. The spread between
/// restart minimizers certifies that the result is solver-independent.
template <class M>
ReferenceResult<M> reference_solution(const M& m, const FirstOrderOracle<M>& oracle,
                                      const std::vector<typename M::Point>& inits,
                                      double step, double tol = 1e-12,
                                      long max_iterations = 200000) {
  if (inits.empty()) throw ConfigError("reference_solution: need at least one init");
  if (!(step > 0.0)) throw ConfigError("reference_solution: step must be positive");
  Rng rng(0);
  std::vector<typename M::Point> minimizers;
  ReferenceResult<M> best;
  bool have_best = false;
  long total_iters = 0;
  for (const auto& x0 : inits) {
    typename M::Point x = x0;
    double f = oracle.objective(x);
    double gn = 0.0;
    long it = 0;
    for (; it < max_iterations; ++it) {
      auto g = oracle.gradient(x, rng);
      gn = std::sqrt(std::max(0.0, m.inner(x, g, g)));
      if (!std::isfinite(f) || !std::isfinite(gn))
        throw NumericalFailure("reference_solution: non-finite value", it);
      if (gn <= tol * (1.0 + std::abs(f))) break;
      x = m.exp(x, m.scale(g, -step));
      f = oracle.objective(x);
    }
    if (it >= max_iterations)
      throw NumericalFailure(
          "reference_solution: no convergence within iteration cap (grad_norm=" +
              std::to_string(gn) + ")",
          it);
    total_iters += it;
    minimizers.push_back(x);
    if (!have_best || f < best.f) {
      best.x = x;
      best.f = f;
      best.grad_norm = gn;
      have_best = true;
    }
  }
  for (std::size_t i = 0; i < minimizers.size(); ++i)
    for (std::size_t j = i + 1; j < minimizers.size(); ++j)
      best.multistart_spread =
          std::max(best.multistart_spread, m.distance(minimizers[i], minimizers[j]));
  best.iterations = total_iters;
  return best;
}

} // namespace gcopt
