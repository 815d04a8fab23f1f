#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gcopt/error.hpp"
#include "gcopt/manifolds/average.hpp"
#include "gcopt/rng.hpp"
#include "gcopt/trig.hpp"

namespace gcopt {

/// The seven analyzed first-order configurations. Each id fixes a step-size
/// schedule, an averaging policy and a suboptimality bound; everything else
/// (the iteration loop) is shared.
enum class TheoremId { T1 = 1, T2, T3, T4, T5, T6, T7 };

std::string to_string(TheoremId id);
TheoremId theorem_from_string(const std::string& s);

enum class Averaging {
  UniformStream,        // uniform running mean of x_1..x_t
  Weighted2s,           // running mean with weights proportional to s
  NoneLastIterate,      // output is the last recorded iterate
  SmoothStochasticTail, // uniform mean of x_2..x_{t-1} plus zeta-weighted tail
};

/// Problem constants a preset or bound may require. All optional; presets
/// validate what they need and name the missing constant in the error.
struct OracleConstants {
  std::optional<double> L_f;   // Lipschitz constant of f
  std::optional<double> L_g;   // Lipschitz constant of grad f
  std::optional<double> mu;    // strong convexity
  std::optional<double> G;     // bound on E||stochastic gradient||^2 = G^2
  std::optional<double> sigma; // sqrt of gradient noise variance
  std::optional<double> D;     // domain diameter
};

/// First-order access to an objective. Deterministic oracles ignore the RNG.
template <class M>
struct FirstOrderOracle {
  std::function<double(const typename M::Point&)> objective;
  std::function<typename M::Tangent(const typename M::Point&, Rng&)> gradient;
  bool deterministic = true;
  OracleConstants constants;
};

// Step-size schedules, one per theorem family (exact formulas).
double schedule_T1(double D, double L_f, double zeta_D, long t); // D / (L_f sqrt(zeta t))
double schedule_T2(double D, double G, double zeta_D, long t);   // D / (G sqrt(zeta t))
double schedule_T3T4(long s, double mu);                         // 2 / (mu (s+1))
double schedule_T5T7(double L_g);                                // 1 / L_g
double schedule_T6(double L_g, double D, double sigma, double zeta_D,
                   long t); // 1 / (L_g + 1/alpha), alpha = (D/sigma) sqrt(1/(zeta t))

/// Merge weight of the tail-averaged scheme: 1/s while streaming
/// (2 <= s <= t-2), zeta/(zeta + t - 2) for the final step (s = t-1).
double averaging_T6_policy(long s, long t, double zeta_D);

/// Theorem-stated suboptimality bound evaluated at horizon t.
double theoretical_bound(TheoremId id, const OracleConstants& c, double kappa, long t);

struct SolverPreset {
  TheoremId theorem;
  std::function<double(long)> step_schedule; // s (1-based) -> eta_s
  Averaging averaging;
  long horizon;
  double zeta_D = 1.0; // zeta(kappa, D) captured at preset construction
};

/// Builds the preset for a theorem id, validating the constants its schedule
/// needs against the manifold's curvature lower bound.
SolverPreset make_preset(TheoremId id, const OracleConstants& c, double kappa,
                         long horizon);

struct TraceRecord {
  long s;
  double f_x;
  double f_avg;      // NaN when the preset does not average (or not defined yet)
  double eta;
  double grad_norm;
  double dist_to_ref; // NaN without a reference point
};

struct RunTrace {
  std::vector<TraceRecord> records;
  TheoremId theorem = TheoremId::T1;
  std::uint64_t seed = 0;
  std::string problem;
  OracleConstants constants;

  std::string to_csv() const;
};

template <class M>
struct RunResult {
  RunTrace trace;
  typename M::Point x_last;     // product of the final update
  typename M::Point designated; // averaged iterate, or x_t for last-iterate presets
  double f_designated = 0.0;
};

/// Runs exactly `horizon` iterations of x_{s+1} = Exp_{x_s}(-eta_s g_s),
/// maintaining the preset's running average through average_step. Record s
/// holds the state before update s, so the designated output of last-iterate
/// presets is the final recorded state x_t.
template <class M>
RunResult<M> run(const SolverPreset& preset, const FirstOrderOracle<M>& oracle,
                 const M& m, const typename M::Point& x1, std::uint64_t seed,
                 const std::optional<typename M::Point>& reference = {},
                 const std::string& problem_name = "") {
  if (preset.horizon < 1) throw ConfigError("run: horizon must be >= 1");
  const long t = preset.horizon;
  const bool tail = preset.averaging == Averaging::SmoothStochasticTail;
  if (tail && t < 2)
    throw ConfigError("run: tail-averaged preset requires horizon >= 2");

  Rng rng(seed);
  RunTrace trace;
  trace.records.reserve(t);
  trace.theorem = preset.theorem;
  trace.seed = seed;
  trace.problem = problem_name;
  if (tail && t <= 3)
    trace.problem += " [tail average degenerate: t<=3 keeps x_2 plus the final weight]";
  trace.constants = oracle.constants;

  typename M::Point x = x1;
  typename M::Point xbar = x1;
  bool have_avg = !tail && preset.averaging != Averaging::NoneLastIterate;
  typename M::Point x_t = x1; // last recorded iterate

  for (long s = 1; s <= t; ++s) {
    const double f = oracle.objective(x);
    if (!std::isfinite(f)) throw NumericalFailure("run: non-finite objective", s);
    auto g = oracle.gradient(x, rng);
    const double g2 = m.inner(x, g, g);
    if (!std::isfinite(g2)) throw NumericalFailure("run: non-finite gradient", s);
    const double gn = std::sqrt(std::max(0.0, g2));
    const double eta = preset.step_schedule(s);

    TraceRecord rec;
    rec.s = s;
    rec.f_x = f;
    rec.f_avg = have_avg ? oracle.objective(xbar) : std::nan("");
    rec.eta = eta;
    rec.grad_norm = gn;
    rec.dist_to_ref = reference ? m.distance(x, *reference) : std::nan("");
    trace.records.push_back(rec);
    if (s == t) x_t = x;

    typename M::Point x_next = m.exp(x, m.scale(g, -eta));
    const long k = s + 1; // index of the incoming iterate
    if (k <= t) {
      switch (preset.averaging) {
        case Averaging::UniformStream:
          xbar = average_step(m, xbar, x_next, 1.0 / static_cast<double>(k));
          break;
        case Averaging::Weighted2s:
          xbar = average_step(m, xbar, x_next, 2.0 / static_cast<double>(k + 1));
          break;
        case Averaging::SmoothStochasticTail:
          if (k == 2) {
            xbar = x_next;
            have_avg = true;
          } else {
            xbar = average_step(m, xbar, x_next,
                                averaging_T6_policy(k - 1, t, preset.zeta_D));
          }
          break;
        case Averaging::NoneLastIterate:
          break;
      }
    }
    x = std::move(x_next);
  }

  RunResult<M> result{std::move(trace), x,
                      preset.averaging == Averaging::NoneLastIterate ? x_t : xbar, 0.0};
  result.f_designated = oracle.objective(result.designated);
  return result;
}

struct DescentReport {
  std::vector<long> violations;
  double worst_violation = 0.0;
  bool pass = true;
};

/// Verifies the descent inequality f(x_{s+1}) - f(x_s) <= -||g_s||^2/(2 L_g)
/// over a recorded trace (valid for the constant 1/L_g step presets).
DescentReport check_descent(const RunTrace& trace, double L_g);

} // namespace gcopt
