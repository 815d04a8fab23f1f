#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "gcopt/manifolds/euclidean.hpp"
#include "gcopt/problems/objectives.hpp"
#include "gcopt/solvers.hpp"

using namespace gcopt;

// frozen from an arbitrary-precision evaluation before the build
namespace {
constexpr double kEtaT1Example = 0.13885442593420037; // 2/(10 sqrt(zeta(-1,2)))
constexpr double kBoundT5Example = 1.2355567736824595; // zeta*3*4/(2(zeta+8)), zeta=zeta(-1,2)

OracleConstants constants_with(std::optional<double> L_f, std::optional<double> L_g,
                               std::optional<double> mu, std::optional<double> G,
                               std::optional<double> sigma, std::optional<double> D) {
  OracleConstants c;
  c.L_f = L_f;
  c.L_g = L_g;
  c.mu = mu;
  c.G = G;
  c.sigma = sigma;
  c.D = D;
  return c;
}

} // namespace

TEST_CASE("step-size schedules match the closed forms") {
  CHECK(schedule_T1(1.0, 1.0, 1.0, 1) == 1.0);
  CHECK(schedule_T1(2.0, 1.0, 1.0, 100) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(schedule_T1(2.0, 1.0, zeta(-1.0, 2.0), 100) ==
        doctest::Approx(kEtaT1Example).epsilon(1e-15));
  CHECK(schedule_T2(2.0, 4.0, 1.0, 25) == doctest::Approx(0.1).epsilon(1e-15));

  CHECK(schedule_T3T4(1, 1.0) == 1.0);
  CHECK(schedule_T3T4(3, 2.0) == doctest::Approx(0.25).epsilon(1e-15));
  double prev = schedule_T3T4(1, 0.5);
  for (long s = 2; s < 100; ++s) {
    const double eta = schedule_T3T4(s, 0.5);
    CHECK(eta < prev);
    prev = eta;
  }

  CHECK(schedule_T5T7(1.0) == 1.0);
  CHECK(schedule_T5T7(500.0) == doctest::Approx(1.0 / 500.0));

  CHECK(schedule_T6(1.0, 1.0, 1.0, 1.0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  // sigma -> 0 recovers the deterministic step
  CHECK(schedule_T6(2.0, 1.0, 1e-9, 1.0, 100) == doctest::Approx(0.5).epsilon(1e-6));
  {
    const double L = 3.0, D = 2.0, sigma = 0.7, zd = 1.8;
    const long t = 1000;
    const double alpha = (D / sigma) / std::sqrt(zd * t);
    CHECK(schedule_T6(L, D, sigma, zd, t) ==
          doctest::Approx(1.0 / (L + 1.0 / alpha)).epsilon(1e-15));
  }

  CHECK_THROWS_AS(schedule_T1(-1.0, 1.0, 1.0, 10), ConfigError);
  CHECK_THROWS_AS(schedule_T3T4(1, 0.0), ConfigError);
  CHECK_THROWS_AS(schedule_T6(1.0, 1.0, 0.0, 1.0, 10), ConfigError);
}

TEST_CASE("tail averaging policy weights") {
  CHECK(averaging_T6_policy(2, 10, 2.0) == doctest::Approx(0.5));
  CHECK(averaging_T6_policy(5, 10, 2.0) == doctest::Approx(0.2));
  CHECK(averaging_T6_policy(9, 10, 2.0) == doctest::Approx(0.2)); // 2/(2+8)
  CHECK_THROWS_AS(averaging_T6_policy(2, 1, 2.0), ConfigError);
  CHECK_THROWS_AS(averaging_T6_policy(1, 10, 2.0), ConfigError);
}

TEST_CASE("theoretical bounds evaluate the theorem formulas") {
  CHECK(theoretical_bound(TheoremId::T1,
                          constants_with(1.0, {}, {}, {}, {}, 1.0), 0.0, 4) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(theoretical_bound(TheoremId::T5,
                          constants_with({}, 3.0, {}, {}, {}, 2.0), -1.0, 10) ==
        doctest::Approx(kBoundT5Example).epsilon(1e-15));
  // flat T7: epsilon = mu/L_g when zeta = 1
  const double b7 = theoretical_bound(TheoremId::T7,
                                      constants_with({}, 4.0, 1.0, {}, {}, 1.0), 0.0, 12);
  CHECK(b7 == doctest::Approx(std::pow(0.75, 10.0) * 2.0).epsilon(1e-12));

  CHECK_THROWS_AS(theoretical_bound(TheoremId::T5,
                                    constants_with({}, 1.0, {}, {}, {}, 1.0), 0.0, 1),
                  DomainError);
  CHECK_THROWS_WITH_AS(
      theoretical_bound(TheoremId::T1, constants_with({}, {}, {}, {}, {}, 1.0), 0.0, 4),
      "T1 bound requires constant L_f", ConfigError);
}

TEST_CASE("presets validate their constants and pick the right policies") {
  const double kappa = -1.0;
  auto c = constants_with(1.0, 2.0, 3.0, 4.0, 0.5, 2.0);
  CHECK(make_preset(TheoremId::T1, c, kappa, 10).averaging == Averaging::UniformStream);
  CHECK(make_preset(TheoremId::T2, c, kappa, 10).averaging == Averaging::UniformStream);
  CHECK(make_preset(TheoremId::T3, c, kappa, 10).averaging == Averaging::Weighted2s);
  CHECK(make_preset(TheoremId::T4, c, kappa, 10).averaging == Averaging::Weighted2s);
  CHECK(make_preset(TheoremId::T5, c, kappa, 10).averaging ==
        Averaging::NoneLastIterate);
  CHECK(make_preset(TheoremId::T6, c, kappa, 10).averaging ==
        Averaging::SmoothStochasticTail);
  CHECK(make_preset(TheoremId::T7, c, kappa, 10).averaging ==
        Averaging::NoneLastIterate);

  auto missing = c;
  missing.D.reset();
  CHECK_THROWS_WITH_AS(make_preset(TheoremId::T1, missing, kappa, 10),
                       "T1 requires constant D", ConfigError);
  auto zero_sigma = c;
  zero_sigma.sigma = 0.0;
  CHECK_THROWS_AS(make_preset(TheoremId::T6, zero_sigma, kappa, 10), ConfigError);

  // constant schedules are constant; T3 decays
  const auto p1 = make_preset(TheoremId::T1, c, kappa, 10);
  CHECK(p1.step_schedule(1) == p1.step_schedule(9));
  const auto p3 = make_preset(TheoremId::T3, c, kappa, 10);
  CHECK(p3.step_schedule(2) < p3.step_schedule(1));
}

TEST_CASE("zero-gradient oracle keeps every iterate at the start point") {
  EuclideanManifold m(3);
  FirstOrderOracle<EuclideanManifold> oracle;
  oracle.objective = [](const Vector&) { return 4.0; };
  oracle.gradient = [&m](const Vector& x, Rng&) { return m.zero_tangent(x); };
  oracle.constants = constants_with(1.0, 1.0, 1.0, 1.0, {}, 1.0);

  const Vector x1 = Vector::Ones(3);
  for (TheoremId id : {TheoremId::T1, TheoremId::T3, TheoremId::T5}) {
    const auto preset = make_preset(id, oracle.constants, 0.0, 20);
    const auto result = run(preset, oracle, m, x1, 1);
    CHECK((result.designated - x1).norm() == 0.0);
    for (const auto& rec : result.trace.records) CHECK(rec.f_x == 4.0);
    CHECK(result.trace.records.size() == 20);
  }
}

TEST_CASE("quadratic with unit smoothness converges in one gradient step") {
  EuclideanManifold m(4);
  auto oracle = euclidean_quadratic(4);
  const auto preset = make_preset(TheoremId::T5, oracle.constants, 0.0, 5);
  Vector x1(4);
  x1 << 1, -2, 3, 0.5;
  const auto result = run(preset, oracle, m, x1, 0);
  CHECK(result.trace.records[0].f_x == doctest::Approx(0.5 * x1.squaredNorm()));
  for (std::size_t i = 1; i < result.trace.records.size(); ++i)
    CHECK(result.trace.records[i].f_x == 0.0); // exact minimizer after one step
  CHECK(result.f_designated == 0.0);
}

namespace {

// independent flat-space recursion in plain std::vector arithmetic
struct FlatRun {
  std::vector<std::vector<double>> iterates;
  std::vector<std::vector<double>> averages;
};

FlatRun flat_reference(const std::vector<double>& x1, long t, TheoremId id,
                       const OracleConstants& c, double zeta_D) {
  auto grad = [](const std::vector<double>& x) { return x; }; // quadratic oracle
  auto eta_of = [&](long s) -> double {
    switch (id) {
      case TheoremId::T1: return *c.D / (*c.L_f * std::sqrt(zeta_D * t));
      case TheoremId::T3: return 2.0 / (*c.mu * (s + 1));
      case TheoremId::T5: return 1.0 / *c.L_g;
      default: throw std::logic_error("unsupported");
    }
  };
  FlatRun out;
  std::vector<double> x = x1, xbar = x1;
  for (long s = 1; s <= t; ++s) {
    out.iterates.push_back(x);
    out.averages.push_back(xbar);
    std::vector<double> g = grad(x);
    std::vector<double> x_next(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) x_next[i] = x[i] - eta_of(s) * g[i];
    const long k = s + 1;
    if (k <= t) {
      double w = 0.0;
      if (id == TheoremId::T1) w = 1.0 / static_cast<double>(k);
      if (id == TheoremId::T3) w = 2.0 / static_cast<double>(k + 1);
      if (id == TheoremId::T5) w = 1.0;
      for (std::size_t i = 0; i < x.size(); ++i)
        xbar[i] = xbar[i] + w * (x_next[i] - xbar[i]);
    }
    x = x_next;
  }
  return out;
}

} // namespace

TEST_CASE("flat-space equivalence: manifold loop matches the plain recursion") {
  const Index dim = 3;
  EuclideanManifold m(dim);
  auto oracle = euclidean_quadratic(dim);
  oracle.constants = constants_with(1.0, 10.0, 0.01, 1.0, {}, 5.0);

  Vector x1(dim);
  x1 << 2.0, -1.0, 0.5;
  const std::vector<double> x1_flat = {2.0, -1.0, 0.5};
  const long t = 1000;

  for (TheoremId id : {TheoremId::T1, TheoremId::T3, TheoremId::T5}) {
    const auto preset = make_preset(id, oracle.constants, 0.0, t);
    const auto flat = flat_reference(x1_flat, t, id, oracle.constants, preset.zeta_D);

    // replay the manifold run record by record against the flat iterates
    EuclideanManifold::Point x = x1;
    Rng rng(0);
    double worst = 0.0;
    for (long s = 1; s <= t; ++s) {
      for (Index i = 0; i < dim; ++i)
        worst = std::max(worst, std::abs(x[i] - flat.iterates[s - 1][i]));
      const auto g = oracle.gradient(x, rng);
      x = m.exp(x, m.scale(g, -preset.step_schedule(s)));
    }
    CHECK(worst < 1e-12);

    // and the designated output against the flat average
    const auto result = run(preset, oracle, m, x1, 0);
    const auto& last_avg =
        id == TheoremId::T5 ? flat.iterates.back() : flat.averages.back();
    double diff = 0.0;
    for (Index i = 0; i < dim; ++i)
      diff = std::max(diff, std::abs(result.designated[i] - last_avg[i]));
    CHECK(diff < 1e-12);
  }
}

TEST_CASE("averaging weight identities on flat geometry") {
  const Index dim = 2;
  EuclideanManifold m(dim);
  // deterministic drifting oracle so iterates are all distinct
  FirstOrderOracle<EuclideanManifold> oracle;
  oracle.objective = [](const Vector& x) { return x.sum(); };
  Rng drift(99);
  auto drift_ptr = std::make_shared<Rng>(drift);
  oracle.gradient = [drift_ptr](const Vector& x, Rng&) {
    Vector g(x.size());
    for (Index i = 0; i < x.size(); ++i) g[i] = drift_ptr->uniform(-1.0, 1.0);
    return EuclideanManifold::Tangent{x, g};
  };
  oracle.constants = constants_with(1.0, 1.0, 1.0, 1.0, {}, 1.0);

  const long t = 200;
  for (TheoremId id : {TheoremId::T1, TheoremId::T3}) {
    *drift_ptr = Rng(99);
    const auto preset = make_preset(id, oracle.constants, 0.0, t);

    // replay iterates with an identical drift stream
    *drift_ptr = Rng(99);
    std::vector<Vector> xs;
    Vector x = Vector::Zero(dim);
    Rng rng(0);
    for (long s = 1; s <= t; ++s) {
      xs.push_back(x);
      const auto g = oracle.gradient(x, rng);
      x = m.exp(x, m.scale(g, -preset.step_schedule(s)));
    }

    *drift_ptr = Rng(99);
    const auto result = run(preset, oracle, m, Vector::Zero(dim), 0);

    Vector expected = Vector::Zero(dim);
    double total = 0.0;
    for (long s = 1; s <= t; ++s) {
      const double w = id == TheoremId::T1 ? 1.0 : static_cast<double>(s);
      expected += w * xs[s - 1];
      total += w;
    }
    expected /= total; // uniform mean, or weights 2s/(t(t+1))
    CHECK((result.designated - expected).norm() < 1e-10);
  }
}

TEST_CASE("tail-averaged scheme: flat weights are (1,...,1,zeta)/(zeta+t-2)") {
  const Index dim = 2;
  EuclideanManifold m(dim);
  FirstOrderOracle<EuclideanManifold> oracle;
  oracle.objective = [](const Vector& x) { return x.sum(); };
  auto drift_ptr = std::make_shared<Rng>(7);
  oracle.gradient = [drift_ptr](const Vector& x, Rng&) {
    Vector g(x.size());
    for (Index i = 0; i < x.size(); ++i) g[i] = drift_ptr->uniform(-1.0, 1.0);
    return EuclideanManifold::Tangent{x, g};
  };
  oracle.constants = constants_with({}, 2.0, {}, {}, 0.5, 3.0);

  const long t = 50;
  const auto preset = make_preset(TheoremId::T6, oracle.constants, 0.0, t);
  CHECK(preset.zeta_D == 1.0); // flat: uniform mean of x_2..x_t

  *drift_ptr = Rng(7);
  std::vector<Vector> xs;
  Vector x = Vector::Zero(dim);
  Rng rng(0);
  for (long s = 1; s <= t; ++s) {
    xs.push_back(x);
    const auto g = oracle.gradient(x, rng);
    x = m.exp(x, m.scale(g, -preset.step_schedule(s)));
  }
  *drift_ptr = Rng(7);
  const auto result = run(preset, oracle, m, Vector::Zero(dim), 0);

  Vector expected = Vector::Zero(dim);
  for (long s = 2; s <= t; ++s) expected += xs[s - 1];
  expected /= static_cast<double>(t - 1);
  CHECK((result.designated - expected).norm() < 1e-10);

  // t = 2 and t = 3 edge branches produce defined outputs
  for (long small_t : {2L, 3L}) {
    *drift_ptr = Rng(7);
    const auto p_small = make_preset(TheoremId::T6, oracle.constants, 0.0, small_t);
    *drift_ptr = Rng(7);
    const auto r_small = run(p_small, oracle, m, Vector::Zero(dim), 0);
    CHECK(r_small.trace.records.size() == static_cast<std::size_t>(small_t));
    CHECK(std::isfinite(r_small.f_designated));
  }
}

TEST_CASE("identical seeds produce identical traces") {
  EuclideanManifold m(3);
  auto base = euclidean_quadratic(3);
  auto oracle = with_spherical_noise(m, base, 0.3);
  oracle.constants = constants_with({}, 1.0, {}, {}, 0.3, 4.0);
  const auto preset = make_preset(TheoremId::T6, oracle.constants, 0.0, 100);
  const Vector x1 = Vector::Ones(3);
  const auto a = run(preset, oracle, m, x1, 1234);
  const auto b = run(preset, oracle, m, x1, 1234);
  CHECK(a.trace.to_csv() == b.trace.to_csv());
  const auto c = run(preset, oracle, m, x1, 1235);
  CHECK(a.trace.to_csv() != c.trace.to_csv());
}

TEST_CASE("non-finite oracle values raise numerical failures with the iteration") {
  EuclideanManifold m(2);
  FirstOrderOracle<EuclideanManifold> oracle;
  oracle.objective = [](const Vector& x) { return x.sum(); };
  oracle.gradient = [](const Vector& x, Rng&) {
    return EuclideanManifold::Tangent{x, Vector::Constant(2, std::nan(""))};
  };
  oracle.constants.L_g = 1.0;
  const auto preset = make_preset(TheoremId::T5, oracle.constants, 0.0, 10);
  try {
    (void)run(preset, oracle, m, Vector::Ones(2), 0);
    FAIL("expected NumericalFailure");
  } catch (const NumericalFailure& e) {
    CHECK(e.iteration == 1);
  }
}

TEST_CASE("trace csv carries metadata comments and exact column layout") {
  EuclideanManifold m(2);
  auto oracle = euclidean_quadratic(2);
  const auto preset = make_preset(TheoremId::T5, oracle.constants, 0.0, 3);
  const auto result =
      run(preset, oracle, m, Vector::Ones(2), 7, std::optional<Vector>(Vector::Zero(2)),
          "euclidean-quad");
  const std::string csv = result.trace.to_csv();
  CHECK(csv.find("# theorem=T5 seed=7 problem=euclidean-quad") == 0);
  CHECK(csv.find("s,f_x,f_avg,eta,grad_norm,dist_to_ref\n") != std::string::npos);
  CHECK(csv.find("# constants:") != std::string::npos);
  // 2 comment lines + header + 3 records
  long lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 6);
}

TEST_CASE("descent check accepts gradient descent and reports violations") {
  EuclideanManifold m(3);
  auto oracle = euclidean_quadratic(3);
  oracle.constants.L_g = 2.0; // eta = 1/2: strictly decreasing, not one-shot
  const auto preset = make_preset(TheoremId::T5, oracle.constants, 0.0, 30);
  const auto result = run(preset, oracle, m, Vector::Ones(3), 0);
  const auto report = check_descent(result.trace, 2.0);
  CHECK(report.pass);
  CHECK(report.violations.empty());

  // T5 monotonicity of the objective column
  for (std::size_t i = 1; i < result.trace.records.size(); ++i)
    CHECK(result.trace.records[i].f_x <=
          result.trace.records[i - 1].f_x + 1e-9 * (1.0 + result.trace.records[i - 1].f_x));

  // a fabricated ascending trace is flagged
  RunTrace bad;
  bad.records.push_back({1, 1.0, std::nan(""), 0.1, 1.0, std::nan("")});
  bad.records.push_back({2, 2.0, std::nan(""), 0.1, 1.0, std::nan("")});
  const auto flagged = check_descent(bad, 1.0);
  CHECK_FALSE(flagged.pass);
  CHECK(flagged.violations == std::vector<long>{1});
}
