#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcopt/manifolds/hyperbolic.hpp"
#include "gcopt/rng.hpp"
#include "gcopt/trig.hpp"
#include "gcopt/types.hpp"

namespace gcopt {

/// Outcome of one numerical certification sweep.
struct CheckReport {
  std::string check_name;
  long n_samples = 0;
  double min_residual = 0.0;  // smallest slack seen (negative = violation side)
  double max_violation = 0.0; // worst violation beyond the check's tolerance, >= 0
  std::uint64_t seed = 0;
  bool pass = false;
  std::string note;
};

std::string reports_to_csv(const std::vector<CheckReport>& reports);
std::string reports_to_text(const std::vector<CheckReport>& reports);

/// Builds a realizable geodesic triangle: two random tangents at a random base
/// point are pushed through the exponential map, then sides and angle are
/// measured back with distance/log/inner.
GeodesicTriangle sample_triangle(const HyperbolicManifold& m, Rng& rng, double side_cap);

/// Residual (RHS - LHS) of the per-step inequality
///   <-g_s, Log_{x_s}(x)> <= (d^2(x_s,x) - d^2(x_{s+1},x)) / (2 eta)
///                           + zeta_cap * eta / 2 * ||g_s||^2
/// after performing the actual update x_{s+1} = Exp_{x_s}(-eta g_s).
/// zeta_cap must dominate zeta(kappa, d(x_s, x)).
template <class M>
double corollary1_residual(const M& m, const typename M::Point& x_s,
                           const typename M::Point& x, const typename M::Tangent& g_s,
                           double eta, double zeta_cap, double* term_scale = nullptr) {
  if (!(eta > 0.0)) throw ContractViolation("corollary1_residual: eta must be positive");
  const auto x_next = m.exp(x_s, m.scale(g_s, -eta));
  const double d_s = m.distance(x_s, x);
  const double d_next = m.distance(x_next, x);
  const double g2 = m.inner(x_s, g_s, g_s);
  const double lhs = -m.inner(x_s, g_s, m.log(x_s, x));
  const double rhs = (d_s * d_s - d_next * d_next) / (2.0 * eta) + 0.5 * zeta_cap * eta * g2;
  if (term_scale)
    *term_scale = 1.0 + std::abs(lhs) + (d_s * d_s + d_next * d_next) / (2.0 * eta) +
                  0.5 * zeta_cap * eta * g2;
  return rhs - lhs;
}

/// Monte-Carlo sweep of the trigonometric distance bound on hyperbolic
/// geometry: bound(b,c,A,kappa) - a^2 over sampled triangles, normalized by
/// (1 + a^2). Passes when the minimum stays above -1e-9.
CheckReport certify_lemma1_monte_carlo(double kappa, long n_samples, double side_cap,
                                       std::uint64_t seed, int threads = 1);

/// Equality branch of the bound at b = 0 (degenerate triangles): the bound
/// must coincide with a^2 = c^2 to 1e-10.
CheckReport certify_lemma1_equality_b0(double kappa, long n_samples, std::uint64_t seed);

/// Update-inequality sweep on hyperbolic geometry (residual >= -1e-9 * scale).
CheckReport certify_corollary1_hyperbolic(double kappa, Index dim, long n_samples,
                                          std::uint64_t seed, int threads = 1);

/// Flat equality case: |residual| <= 1e-12 * scale on Euclidean geometry.
CheckReport certify_corollary1_euclidean(Index dim, long n_samples, std::uint64_t seed);

/// Grid for the super-exponential inequality check.
struct GridSpec {
  double b_max = 10.0;
  double c_max = 10.0;
  Index nb = 100;
  Index nc = 100;
  Index nA = 100;
};

/// Verifies d^2/db^2 g >= g for g(b,c,A) = cosh(sqrt((c/tanh c) b^2 + c^2
/// - 2 b c cos A)) by Richardson-extrapolated central differences (h = 1e-4)
/// over the grid b,c in (0, max], A in [0, pi]. Passes when the minimum of
/// the difference is >= -1e-6 (discretization slack).
CheckReport certify_appendix_g_inequality(const GridSpec& grid);

/// Exact rescaling identity
///   bound(b,c,A,kappa) = bound(sqrt|kappa| b, sqrt|kappa| c, A, -1) / |kappa|
/// checked to 1e-12 relative to the term magnitude.
CheckReport certify_curvature_scaling(long n_samples, std::uint64_t seed);

} // namespace gcopt
