#pragma once

#include "gcopt/error.hpp"

namespace gcopt {

/// On-manifold running-average step: exp_map(xbar, w * log_map(xbar, x_new)).
/// w = 0 returns xbar and w = 1 returns x_new exactly; this is the primitive
/// behind every averaged iterate scheme.
template <class M>
typename M::Point average_step(const M& m, const typename M::Point& xbar,
                               const typename M::Point& x_new, double w) {
  if (!(w >= 0.0 && w <= 1.0))
    throw ContractViolation("average_step: weight must lie in [0,1]");
  if (w == 0.0) return xbar;
  if (w == 1.0) return x_new;
  return m.exp(xbar, m.scale(m.log(xbar, x_new), w));
}

} // namespace gcopt
