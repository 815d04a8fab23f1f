#include "gcopt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "gcopt/manifolds/euclidean.hpp"
#include "gcopt/manifolds/hyperbolic.hpp"
#include "gcopt/manifolds/spd.hpp"
#include "gcopt/problems/frechet.hpp"
#include "gcopt/problems/karcher.hpp"
#include "gcopt/problems/objectives.hpp"
#include "gcopt/problems/reference.hpp"

namespace gcopt {
namespace {

namespace fs = std::filesystem;

// additive guard at measurement precision; only relevant once a run has
// saturated double precision (e.g. the late linear-rate checkpoints)
double measurement_eps(double f_ref) { return 1e-13 * (1.0 + std::abs(f_ref)); }

void parallel_for(int jobs, long count, const std::function<void(long)>& body) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count <= 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::string format_g17(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

} // namespace

ProblemKind problem_from_string(const std::string& s) {
  if (s == "karcher") return ProblemKind::Karcher;
  if (s == "frechet") return ProblemKind::Frechet;
  if (s == "euclidean-quad") return ProblemKind::EuclideanQuad;
  if (s == "hyperbolic-dist") return ProblemKind::HyperbolicDist;
  throw ConfigError("unknown problem: " + s);
}

std::string to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::Karcher: return "karcher";
    case ProblemKind::Frechet: return "frechet";
    case ProblemKind::EuclideanQuad: return "euclidean-quad";
    case ProblemKind::HyperbolicDist: return "hyperbolic-dist";
  }
  return "?";
}

TheoremId algo_to_theorem(const std::string& algo) {
  static const std::map<std::string, TheoremId> aliases = {
      {"subgrad", TheoremId::T1},     {"st-subgrad", TheoremId::T2},
      {"ssubgrad", TheoremId::T3},    {"st-ssubgrad", TheoremId::T4},
      {"sgd-st", TheoremId::T4},      {"sgd-sm", TheoremId::T6},
      {"gd", TheoremId::T7},
  };
  auto it = aliases.find(algo);
  if (it != aliases.end()) return it->second;
  return theorem_from_string(algo); // accepts T1..T7 directly
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_config: cannot open " + path);
  ExperimentConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) continue;
    if (key == "problem") cfg.problem = problem_from_string(value);
    else if (key == "algo") cfg.algo = value;
    else if (key == "n") cfg.n = std::stol(value);
    else if (key == "N") cfg.N = std::stol(value);
    else if (key == "Q") cfg.Q = std::stod(value);
    else if (key == "kappa") cfg.kappa = std::stod(value);
    else if (key == "D") cfg.D = std::stod(value);
    else if (key == "t") cfg.t = std::stol(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "repeat") cfg.repeat = std::stoi(value);
    else if (key == "jobs") cfg.jobs = std::stoi(value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "tol") cfg.tol = std::stod(value);
    else if (key == "gnuplot") cfg.gnuplot = (value == "1" || value == "true");
    else throw ConfigError("load_config: unknown key " + key);
  }
  return cfg;
}

std::string to_string(RateFit::Model m) {
  return m == RateFit::Model::LogLog ? "loglog" : "semilog";
}

RateFit::Model fit_model_from_string(const std::string& s) {
  if (s == "loglog") return RateFit::Model::LogLog;
  if (s == "semilog") return RateFit::Model::SemiLog;
  throw ConfigError("unknown fit model: " + s);
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points,
                 RateFit::Model model, double window_lo, double window_hi) {
  if (!(window_hi >= window_lo)) throw ConfigError("fit_rate: empty window");
  RateFit fit;
  fit.model = model;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  std::vector<std::pair<double, double>> xy;
  for (const auto& [t, gap] : points) {
    if (t < window_lo || t > window_hi) continue;
    if (!(gap > 0.0) || !std::isfinite(gap) || !(t > 0.0)) {
      fit.shrunk = true;
      continue;
    }
    const double x = model == RateFit::Model::LogLog ? std::log(t) : t;
    xy.emplace_back(x, std::log(gap));
  }
  fit.n_points = static_cast<long>(xy.size());
  if (xy.size() < 3) return fit; // no meaningful fit; caller inspects n_points
  double sx = 0, sy = 0;
  for (const auto& [x, y] : xy) {
    sx += x;
    sy += y;
  }
  const double n = static_cast<double>(xy.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_res = syy - fit.slope * sxy;
  fit.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

namespace {

// one (algo, seed) run reduced to what the summary needs
struct RunRow {
  std::uint64_t seed;
  double f_final;
  double gap;
  RateFit fit;
  std::string trace_path;
  double sup_dist_to_ref;
};

// The experiment curves compare f(final iterate) against the pass budget.
// For budget-free schedules this equals the within-run iterate trace, so the
// fit runs on the trace's f_x column; budget-dependent schedules (T6) get a
// dedicated budget sweep below. The theorem-designated averaged outputs are
// recorded in the trace's f_avg column and drive the bound suites instead.
template <class M>
RunRow execute_run(const ExperimentConfig& cfg, const M& m,
                   const FirstOrderOracle<M>& oracle, const SolverPreset& preset,
                   const typename M::Point& x1, std::uint64_t run_seed,
                   const typename M::Point& ref_point, double f_ref,
                   double passes_per_iter, const std::string& problem_name) {
  auto result = run(preset, oracle, m, x1, run_seed,
                    std::optional<typename M::Point>(ref_point), problem_name);

  RunRow row;
  row.seed = run_seed;
  row.f_final = result.trace.records.back().f_x;
  row.gap = row.f_final - f_ref;
  row.sup_dist_to_ref = 0.0;

  std::vector<std::pair<double, double>> points;
  points.reserve(result.trace.records.size());
  for (const auto& rec : result.trace.records) {
    points.emplace_back(passes_per_iter * static_cast<double>(rec.s), rec.f_x - f_ref);
    if (std::isfinite(rec.dist_to_ref))
      row.sup_dist_to_ref = std::max(row.sup_dist_to_ref, rec.dist_to_ref);
  }
  const double floor = 1e-12 * (1.0 + std::abs(f_ref));
  std::vector<std::pair<double, double>> clean;
  for (auto& pr : points)
    if (pr.second > floor) clean.push_back(pr);
    else clean.emplace_back(pr.first, 0.0); // dropped by fit_rate, flags shrink
  const double passes_total = passes_per_iter * static_cast<double>(preset.horizon);
  if (preset.averaging == Averaging::NoneLastIterate) {
    row.fit = fit_rate(clean, RateFit::Model::SemiLog, 0.0, passes_total);
  } else {
    row.fit = fit_rate(clean, RateFit::Model::LogLog, passes_total / 10.0, passes_total);
  }

  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    const std::string base = cfg.algo + "_seed" + std::to_string(run_seed);
    row.trace_path = (fs::path(cfg.out_dir) / (base + ".csv")).string();
    std::ofstream out(row.trace_path);
    out << result.trace.to_csv();
    if (cfg.gnuplot) {
      std::ofstream dat(fs::path(cfg.out_dir) / (base + ".dat"));
      dat.precision(17);
      dat << "# passes gap\n";
      for (const auto& [passes, gap] : points) dat << passes << ' ' << gap << '\n';
    }
  }
  return row;
}

ExperimentSummary summarize(const ExperimentConfig& cfg, std::vector<RunRow> rows,
                            long horizon, double f_ref,
                            std::vector<std::string> notes) {
  ExperimentSummary summary;
  summary.f_ref = f_ref;
  summary.notes = std::move(notes);
  std::sort(rows.begin(), rows.end(),
            [](const RunRow& a, const RunRow& b) { return a.seed < b.seed; });
  if (rows.size() > 1) {
    double mean_gap = 0.0;
    for (const auto& r : rows) mean_gap += r.gap;
    mean_gap /= static_cast<double>(rows.size());
    summary.notes.push_back("aggregate mean gap over " + std::to_string(rows.size()) +
                            " seeds = " + format_g17(mean_gap));
  }
  for (auto& r : rows) {
    ExperimentSummary::Row row;
    row.algo = cfg.algo;
    row.seed = r.seed;
    row.horizon = horizon;
    row.f_final = r.f_final;
    row.f_ref = f_ref;
    row.gap = r.gap;
    row.fit = r.fit;
    row.trace_path = r.trace_path;
    summary.rows.push_back(std::move(row));
  }
  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    summary.summary_path = (fs::path(cfg.out_dir) / "summary.csv").string();
    std::ofstream out(summary.summary_path);
    out.precision(17);
    for (const auto& note : summary.notes) out << "# " << note << '\n';
    out << "algo,seed,t,f_final,f_ref,gap,fit_model,slope,intercept,r2,window_lo,"
           "window_hi,n_points\n";
    for (const auto& row : summary.rows) {
      out << row.algo << ',' << row.seed << ',' << row.horizon << ','
          << format_g17(row.f_final) << ',' << format_g17(row.f_ref) << ','
          << format_g17(row.gap) << ',' << to_string(row.fit.model) << ','
          << row.fit.slope << ',' << row.fit.intercept << ',' << row.fit.r2 << ','
          << row.fit.window_lo << ',' << row.fit.window_hi << ',' << row.fit.n_points
          << '\n';
    }
  }
  return summary;
}

// Final-iterate gap of the T6 preset as a function of the pass budget. The
// step size follows the budget (eta is a function of t), so the curve cannot
// be read off a single trace; each point is its own short run.
std::vector<std::pair<double, double>> t6_budget_sweep(
    const SpdManifold& m, const KarcherProblem& prob, const Matrix& x1,
    const OracleConstants& c, double kappa, long budget_lo, long budget_hi,
    int points, std::uint64_t seed, double f_ref) {
  std::vector<std::pair<double, double>> out;
  const double zeta_D = zeta(kappa, *c.D);
  for (int i = 0; i < points; ++i) {
    const double frac = points > 1 ? static_cast<double>(i) / (points - 1) : 1.0;
    const long t = std::lround(budget_lo * std::pow(static_cast<double>(budget_hi) /
                                                        static_cast<double>(budget_lo),
                                                    frac));
    const double eta = schedule_T6(*c.L_g, *c.D, *c.sigma, zeta_D, t);
    Rng rng(seed);
    Matrix x = x1;
    for (long s = 1; s <= t; ++s) {
      auto g = karcher_stochastic_gradient(x, prob, rng);
      x = m.exp(x, m.scale(g, -eta));
    }
    out.emplace_back(static_cast<double>(t) / static_cast<double>(prob.N),
                     karcher_loss(x, prob) - f_ref);
  }
  return out;
}

ExperimentSummary run_karcher_experiment(const ExperimentConfig& cfg) {
  const KarcherProblem prob = generate_spd_dataset(cfg.n, cfg.N, cfg.Q, cfg.seed);
  const SpdManifold m(cfg.n, cfg.kappa);
  const Matrix x1 = karcher_arithmetic_mean(prob);
  auto det_oracle = karcher_oracle(prob, false);
  const double L_g = *det_oracle.constants.L_g;

  const auto ref = reference_solution(
      m, det_oracle,
      {x1, karcher_log_euclidean_mean(prob), prob.matrices.front()},
      0.5 / L_g, cfg.tol, 100000);

  const TheoremId theorem = algo_to_theorem(cfg.algo);
  const bool stochastic = theorem == TheoremId::T2 || theorem == TheoremId::T4 ||
                          theorem == TheoremId::T6;
  auto oracle = karcher_oracle(prob, stochastic);

  double d_max = 0.0;
  for (const auto& a : prob.matrices) d_max = std::max(d_max, m.distance(x1, a));
  oracle.constants.D = cfg.D ? *cfg.D : 2.0 * d_max;
  if (theorem == TheoremId::T6) {
    // exact stochastic-gradient standard deviation at the initial point
    const auto g_full = karcher_full_gradient(x1, prob);
    double var = 0.0;
    for (Index i = 0; i < prob.N; ++i) {
      const Matrix gi =
          -2.0 * static_cast<double>(prob.N) * m.log(x1, prob.matrices[i]).v;
      const SpdManifold::Tangent diff{x1, gi - g_full.v};
      var += m.inner(x1, diff, diff);
    }
    oracle.constants.sigma = std::sqrt(var / static_cast<double>(prob.N));
  }
  if (theorem == TheoremId::T1 || theorem == TheoremId::T2) {
    // rough magnitude estimates at the initial point; these presets are not
    // part of the figure protocol
    const auto g_full = karcher_full_gradient(x1, prob);
    const double gn = std::sqrt(m.inner(x1, g_full, g_full));
    oracle.constants.L_f = 2.0 * gn + 1.0;
    oracle.constants.G = 2.0 * static_cast<double>(prob.N) * (2.0 * d_max) + 1.0;
  }

  const long iterations = stochastic ? cfg.t * static_cast<long>(cfg.N) : cfg.t;
  const auto preset = make_preset(theorem, oracle.constants, cfg.kappa, iterations);
  const double passes_per_iter = stochastic ? 1.0 / static_cast<double>(cfg.N) : 1.0;

  std::vector<RunRow> rows(cfg.repeat);
  parallel_for(cfg.jobs, cfg.repeat, [&](long r) {
    rows[r] = execute_run(cfg, m, oracle, preset, x1, cfg.seed + r, ref.x, ref.f,
                          passes_per_iter, "karcher");
    if (theorem == TheoremId::T6) {
      // budget sweep over the asymptotic window [t/10, t] passes
      const auto sweep = t6_budget_sweep(m, prob, x1, oracle.constants, cfg.kappa,
                                         std::max(2L, iterations / 10), iterations, 16,
                                         cfg.seed + r, ref.f);
      rows[r].fit = fit_rate(sweep, RateFit::Model::LogLog,
                             static_cast<double>(cfg.t) / 10.0,
                             static_cast<double>(cfg.t));
      if (cfg.gnuplot && !cfg.out_dir.empty()) {
        std::ofstream dat(fs::path(cfg.out_dir) /
                          (cfg.algo + "_seed" + std::to_string(cfg.seed + r) +
                           "_sweep.dat"));
        dat.precision(17);
        dat << "# pass_budget final_iterate_gap\n";
        for (const auto& [passes, gap] : sweep) dat << passes << ' ' << gap << '\n';
      }
    }
  });

  std::vector<std::string> notes;
  {
    std::ostringstream note;
    note.precision(6);
    note << "karcher desk scale: n=" << cfg.n << " N=" << cfg.N << " Q=" << cfg.Q
         << " (full scale is 100x100, N up to 1e3, Q up to 1e8; Q=1e8 is replaced by"
            " Q=1e4 at desk scale to keep the reference solve well conditioned)";
    notes.push_back(note.str());
  }
  {
    std::ostringstream note;
    note.precision(10);
    note << "algo " << cfg.algo << " -> " << to_string(theorem)
         << ", constants: L_g=" << L_g << " mu=" << *oracle.constants.mu
         << " D=" << *oracle.constants.D << " kappa=" << cfg.kappa
         << " (kappa is a configured lower bound for the SPD geometry)";
    if (oracle.constants.sigma) note << " sigma=" << *oracle.constants.sigma;
    notes.push_back(note.str());
  }
  if (theorem == TheoremId::T4)
    notes.push_back(
        "sgd-st step size: eta_s = 2/(mu(s+1)) with mu=2N, which equals 1/(N(s+1))");
  notes.push_back(
      "curves report f(final iterate) vs pass budget; averaged outputs feed the"
      " bound suite (verify-bounds)");
  if (theorem == TheoremId::T6)
    notes.push_back(
        "sgd-sm rate fit runs over a budget sweep because its step size is a"
        " function of the total horizon");
  notes.push_back("reference solve: multistart spread " +
                  format_g17(ref.multistart_spread) + ", f_ref " + format_g17(ref.f));
  return summarize(cfg, std::move(rows), iterations, ref.f, std::move(notes));
}

ExperimentSummary run_frechet_experiment(const ExperimentConfig& cfg) {
  if (!(cfg.kappa < 0.0))
    throw ConfigError("frechet experiment requires kappa < 0");
  const FrechetProblem prob =
      make_frechet_problem(cfg.n, cfg.kappa, cfg.N, 1.0, cfg.seed);
  const auto& m = prob.manifold;
  const Vector x1 = prob.anchors.front();
  auto oracle_det = frechet_oracle(prob);

  double anchor_diam = 0.0;
  for (std::size_t i = 0; i < prob.anchors.size(); ++i)
    for (std::size_t j = i + 1; j < prob.anchors.size(); ++j)
      anchor_diam = std::max(anchor_diam, m.distance(prob.anchors[i], prob.anchors[j]));
  const double L_solve = 2.0 * zeta(cfg.kappa, anchor_diam + 2.0);
  std::vector<Vector> inits = {x1, prob.anchors.back()};
  const auto ref =
      reference_solution(m, oracle_det, inits, 1.0 / L_solve, cfg.tol, 200000);

  double r_anch = 0.0;
  for (const auto& a : prob.anchors) r_anch = std::max(r_anch, m.distance(ref.x, a));
  const double delta1 = frechet_loss(prob, x1) - ref.f;
  const double r1 = std::sqrt(std::max(delta1, 1e-30));

  const TheoremId theorem = algo_to_theorem(cfg.algo);
  auto oracle = theorem == TheoremId::T4 ? frechet_anchor_sgd_oracle(prob)
                                         : frechet_oracle(prob);
  if (theorem == TheoremId::T2 || theorem == TheoremId::T6)
    oracle = with_spherical_noise(m, std::move(oracle), 0.5);

  const double reach = r1 + r_anch + 1.0;
  oracle.constants.L_g = 2.0 * zeta(cfg.kappa, reach);
  oracle.constants.L_f = 2.0 * reach;
  oracle.constants.G = 2.0 * reach + 1.0;
  oracle.constants.D = cfg.D ? *cfg.D : std::max(r1, anchor_diam) * 2.0 + 1.0;

  const auto preset = make_preset(theorem, oracle.constants, cfg.kappa, cfg.t);
  std::vector<RunRow> rows(cfg.repeat);
  parallel_for(cfg.jobs, cfg.repeat, [&](long r) {
    rows[r] = execute_run(cfg, m, oracle, preset, x1, cfg.seed + r, ref.x, ref.f, 1.0,
                          "frechet");
  });
  std::vector<std::string> notes = {"frechet mean on " + m.name() + ", " +
                                    std::to_string(prob.anchors.size()) + " anchors"};
  return summarize(cfg, std::move(rows), cfg.t, ref.f, std::move(notes));
}

ExperimentSummary run_euclidean_quad_experiment(const ExperimentConfig& cfg) {
  const EuclideanManifold m(cfg.n);
  auto oracle = euclidean_quadratic(cfg.n);
  Rng rng(cfg.seed);
  const Vector x1 = m.random_point(rng, 2.0) + Vector::Ones(cfg.n);
  oracle.constants.D = cfg.D ? *cfg.D : 2.0 * x1.norm() + 1.0;
  oracle.constants.L_f = oracle.constants.G = x1.norm() + 1.0;
  oracle.constants.sigma = 0.0; // deterministic problem; T6 callers must use T5
  const TheoremId theorem = algo_to_theorem(cfg.algo);
  const auto preset = make_preset(theorem, oracle.constants, 0.0, cfg.t);
  const Vector ref = Vector::Zero(cfg.n);
  std::vector<RunRow> rows(cfg.repeat);
  parallel_for(cfg.jobs, cfg.repeat, [&](long r) {
    rows[r] = execute_run(cfg, m, oracle, preset, x1, cfg.seed + r, ref, 0.0, 1.0,
                          "euclidean-quad");
  });
  return summarize(cfg, std::move(rows), cfg.t, 0.0, {"flat quadratic sanity problem"});
}

ExperimentSummary run_hyperbolic_dist_experiment(const ExperimentConfig& cfg) {
  if (!(cfg.kappa < 0.0))
    throw ConfigError("hyperbolic-dist experiment requires kappa < 0");
  const HyperbolicManifold m(cfg.n, cfg.kappa);
  Rng rng(cfg.seed);
  const auto center = m.random_point(rng, 1.0);
  const auto dir = m.random_unit_tangent(center, rng);
  const Vector x1 = m.exp(center, m.scale(dir, 1.0));
  auto oracle = distance_objective(m, center);
  const TheoremId theorem = algo_to_theorem(cfg.algo);
  if (theorem == TheoremId::T2) oracle = with_spherical_noise(m, std::move(oracle), 0.5);
  oracle.constants.D = cfg.D ? *cfg.D : 2.0 * m.distance(x1, center);
  oracle.constants.G = std::sqrt(1.0 + 0.25);
  // no mu: the distance objective is not strongly convex, so T3/T4 presets
  // are rejected with a configuration error
  const auto preset = make_preset(theorem, oracle.constants, cfg.kappa, cfg.t);
  std::vector<RunRow> rows(cfg.repeat);
  parallel_for(cfg.jobs, cfg.repeat, [&](long r) {
    rows[r] = execute_run(cfg, m, oracle, preset, x1, cfg.seed + r, center, 0.0, 1.0,
                          "hyperbolic-dist");
  });
  return summarize(cfg, std::move(rows), cfg.t, 0.0,
                   {"distance objective on " + m.name()});
}

} // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  if (cfg.t < 1) throw ConfigError("run_experiment: t must be >= 1");
  if (cfg.repeat < 1) throw ConfigError("run_experiment: repeat must be >= 1");
  switch (cfg.problem) {
    case ProblemKind::Karcher: return run_karcher_experiment(cfg);
    case ProblemKind::Frechet: return run_frechet_experiment(cfg);
    case ProblemKind::EuclideanQuad: return run_euclidean_quad_experiment(cfg);
    case ProblemKind::HyperbolicDist: return run_hyperbolic_dist_experiment(cfg);
  }
  throw ConfigError("run_experiment: unknown problem kind");
}

std::string to_string(const BoundReport& report) {
  std::ostringstream out;
  out.precision(6);
  for (const auto& note : report.notes) out << "# " << note << '\n';
  out << "theorem,t,measured,bound,satisfied,advisory\n";
  for (const auto& row : report.rows) {
    out << to_string(row.theorem) << ',' << row.t << ',' << row.measured << ','
        << row.bound << ',' << (row.satisfied ? "yes" : "NO") << ','
        << (row.advisory ? "advisory" : "-");
    if (!row.detail.empty()) out << ',' << row.detail;
    out << '\n';
  }
  out << (report.all_satisfied ? "ALL BOUNDS SATISFIED" : "BOUND VIOLATION") << '\n';
  return out.str();
}

namespace {

// Shared hyperbolic test fixtures for the bound suites. All constants are
// certified: kappa is exact, L_f = 1 for the distance objective, mu = 2 for
// the Frechet mean, and smoothness/diameter come from sublevel-set radii.
struct DistanceFixture {
  HyperbolicManifold m;
  Vector center;
  Vector x1;
  double D;
};

DistanceFixture make_distance_fixture(std::uint64_t seed) {
  HyperbolicManifold m(3, -1.0);
  Rng rng(seed);
  const auto center = m.random_point(rng, 1.0);
  const auto dir = m.random_unit_tangent(center, rng);
  const Vector x1 = m.exp(center, m.scale(dir, 1.0));
  const double D = 2.0 * m.distance(x1, center);
  return DistanceFixture{std::move(m), center, x1, D};
}

struct FrechetFixture {
  FrechetProblem prob;
  Vector x1;
  Vector x_star;
  double f_star;
  double r_anch; // max anchor distance from the optimum
  double r1;     // sublevel-set radius through the initial point
};

FrechetFixture make_frechet_fixture(std::uint64_t seed) {
  FrechetProblem prob = make_frechet_problem(3, -1.0, 8, 0.5, seed);
  const auto& m = prob.manifold;
  const Vector x1 = prob.anchors.front();
  auto oracle = frechet_oracle(prob);
  double anchor_diam = 0.0;
  for (std::size_t i = 0; i < prob.anchors.size(); ++i)
    for (std::size_t j = i + 1; j < prob.anchors.size(); ++j)
      anchor_diam = std::max(anchor_diam, m.distance(prob.anchors[i], prob.anchors[j]));
  const double L_solve = 2.0 * zeta(-1.0, anchor_diam + 2.0);
  const auto ref = reference_solution(m, oracle, {x1, prob.anchors.back()},
                                      1.0 / L_solve, 1e-13, 200000);
  FrechetFixture fx{std::move(prob), x1, ref.x, ref.f, 0.0, 0.0};
  for (const auto& a : fx.prob.anchors)
    fx.r_anch = std::max(fx.r_anch, fx.prob.manifold.distance(ref.x, a));
  const double delta1 = frechet_loss(fx.prob, x1) - ref.f;
  fx.r1 = std::sqrt(std::max(delta1, 0.0)); // mu = 2: d(x1,x*) <= sqrt(delta1)
  return fx;
}

struct SingleRunStats {
  double gap;
  double sup_dist;
};

template <class M>
SingleRunStats run_for_bound(const SolverPreset& preset,
                             const FirstOrderOracle<M>& oracle, const M& m,
                             const typename M::Point& x1, std::uint64_t seed,
                             const typename M::Point& x_star, double f_star) {
  auto result = run(preset, oracle, m, x1, seed,
                    std::optional<typename M::Point>(x_star));
  double sup = 0.0;
  for (const auto& rec : result.trace.records)
    if (std::isfinite(rec.dist_to_ref)) sup = std::max(sup, rec.dist_to_ref);
  return SingleRunStats{result.f_designated - f_star, sup};
}

} // namespace

BoundReport verify_bounds_deterministic(std::uint64_t seed,
                                        const std::vector<long>& checkpoints) {
  BoundReport report;
  const auto dist_fx = make_distance_fixture(seed);
  const auto frechet_fx = make_frechet_fixture(seed + 1);
  const auto& fm = frechet_fx.prob.manifold;

  // T1: nonsmooth Lipschitz on the distance objective (f* = 0 exactly)
  {
    auto oracle = distance_objective(dist_fx.m, dist_fx.center);
    oracle.constants.D = dist_fx.D;
    for (long t : checkpoints) {
      const auto preset = make_preset(TheoremId::T1, oracle.constants, -1.0, t);
      const auto stats = run_for_bound(preset, oracle, dist_fx.m, dist_fx.x1, seed,
                                       dist_fx.center, 0.0);
      BoundCheckRow row;
      row.theorem = TheoremId::T1;
      row.t = t;
      row.measured = stats.gap;
      row.bound = theoretical_bound(TheoremId::T1, oracle.constants, -1.0, t);
      row.satisfied = stats.gap <= row.bound + measurement_eps(0.0) &&
                      stats.sup_dist <= dist_fx.D + 1e-9;
      report.rows.push_back(row);
    }
  }

  // T3: strongly convex nonsmooth on the Frechet mean; Lipschitz constant and
  // diameter certified post hoc from the visited region
  for (long t : checkpoints) {
    auto oracle = frechet_oracle(frechet_fx.prob);
    const auto preset = make_preset(TheoremId::T3, oracle.constants, -1.0, t);
    const auto stats = run_for_bound(preset, oracle, fm, frechet_fx.x1, seed,
                                     frechet_fx.x_star, frechet_fx.f_star);
    OracleConstants bc = oracle.constants;
    bc.D = std::max(stats.sup_dist, 1e-6) * (1.0 + 1e-12);
    bc.L_f = 2.0 * (stats.sup_dist + frechet_fx.r_anch);
    BoundCheckRow row;
    row.theorem = TheoremId::T3;
    row.t = t;
    row.measured = stats.gap;
    row.bound = theoretical_bound(TheoremId::T3, bc, -1.0, t);
    row.satisfied = stats.gap <= row.bound + measurement_eps(frechet_fx.f_star);
    report.rows.push_back(row);
  }

  // T5 / T7: smooth (strongly) convex gradient descent on the Frechet mean
  // with sublevel-set certified constants
  {
    auto oracle = frechet_oracle(frechet_fx.prob);
    const double D_cert = std::max(frechet_fx.r1 * (1.0 + 1e-9), 1e-3);
    const double reach = frechet_fx.r1 + frechet_fx.r_anch + 1.0;
    oracle.constants.D = D_cert;
    oracle.constants.L_g = 2.0 * zeta(-1.0, reach);
    for (TheoremId id : {TheoremId::T5, TheoremId::T7}) {
      for (long t : checkpoints) {
        const auto preset = make_preset(id, oracle.constants, -1.0, t);
        const auto stats = run_for_bound(preset, oracle, fm, frechet_fx.x1, seed,
                                         frechet_fx.x_star, frechet_fx.f_star);
        BoundCheckRow row;
        row.theorem = id;
        row.t = t;
        row.measured = stats.gap;
        row.bound = theoretical_bound(id, oracle.constants, -1.0, t);
        row.satisfied = stats.gap <= row.bound + measurement_eps(frechet_fx.f_star) &&
                        stats.sup_dist <= D_cert + 1e-9;
        report.rows.push_back(row);
      }
    }
  }

  // flat sanity: the same checks with kappa = 0 and classical constants
  {
    EuclideanManifold flat(3);
    Rng rng(seed + 2);
    const Vector center = flat.random_point(rng, 1.0);
    const auto dir = flat.random_unit_tangent(center, rng);
    const Vector x1 = center + dir.v;
    auto oracle = distance_objective(flat, center);
    oracle.constants.D = 2.0;
    for (long t : checkpoints) {
      const auto preset = make_preset(TheoremId::T1, oracle.constants, 0.0, t);
      const auto stats = run_for_bound(preset, oracle, flat, x1, seed, center, 0.0);
      BoundCheckRow row;
      row.theorem = TheoremId::T1;
      row.t = t;
      row.measured = stats.gap;
      row.bound = theoretical_bound(TheoremId::T1, oracle.constants, 0.0, t);
      row.satisfied = stats.gap <= row.bound + measurement_eps(0.0);
      row.detail = "flat";
      report.rows.push_back(row);
    }
  }

  for (const auto& row : report.rows)
    if (!row.satisfied) report.all_satisfied = false;
  report.notes.push_back(
      "deterministic bounds on hyperbolic(kappa=-1) problems plus a flat sanity case");
  return report;
}

BoundReport verify_bounds_stochastic(std::uint64_t seed, int n_seeds,
                                     const std::vector<long>& checkpoints, int jobs) {
  BoundReport report;
  const auto dist_fx = make_distance_fixture(seed);
  const auto frechet_fx = make_frechet_fixture(seed + 1);
  const auto& fm = frechet_fx.prob.manifold;
  const double noise = 0.5;

  auto mean_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };

  // T2: bounded stochastic subgradients of the distance objective;
  // G^2 = 1 + noise^2 exactly (unit subgradient plus spherical noise)
  {
    auto oracle = with_spherical_noise(dist_fx.m, distance_objective(dist_fx.m, dist_fx.center),
                                       noise);
    oracle.constants.D = dist_fx.D;
    oracle.constants.G = std::sqrt(1.0 + noise * noise);
    for (long t : checkpoints) {
      const auto preset = make_preset(TheoremId::T2, oracle.constants, -1.0, t);
      std::vector<double> gaps(n_seeds);
      std::vector<double> sups(n_seeds);
      parallel_for(jobs, n_seeds, [&](long i) {
        const auto stats = run_for_bound(preset, oracle, dist_fx.m, dist_fx.x1,
                                         seed + 1000 + i, dist_fx.center, 0.0);
        gaps[i] = stats.gap;
        sups[i] = stats.sup_dist;
      });
      BoundCheckRow row;
      row.theorem = TheoremId::T2;
      row.t = t;
      row.measured = mean_of(gaps);
      row.bound = theoretical_bound(TheoremId::T2, oracle.constants, -1.0, t);
      row.slack = 1.05;
      row.satisfied = row.measured <= row.slack * row.bound &&
                      *std::max_element(sups.begin(), sups.end()) <= dist_fx.D + 1e-9;
      report.rows.push_back(row);
    }
  }

  // T4: single-anchor stochastic subgradients of the Frechet mean; G and the
  // zeta diameter certified post hoc from the visited region
  for (long t : checkpoints) {
    auto oracle = frechet_anchor_sgd_oracle(frechet_fx.prob);
    const auto preset = make_preset(TheoremId::T4, oracle.constants, -1.0, t);
    std::vector<double> gaps(n_seeds);
    std::vector<double> sups(n_seeds);
    parallel_for(jobs, n_seeds, [&](long i) {
      const auto stats = run_for_bound(preset, oracle, fm, frechet_fx.x1,
                                       seed + 2000 + i, frechet_fx.x_star,
                                       frechet_fx.f_star);
      gaps[i] = stats.gap;
      sups[i] = stats.sup_dist;
    });
    const double r_obs = *std::max_element(sups.begin(), sups.end());
    OracleConstants bc = oracle.constants;
    bc.D = std::max(r_obs, 1e-6) * (1.0 + 1e-12);
    bc.G = 2.0 * (r_obs + frechet_fx.r_anch);
    BoundCheckRow row;
    row.theorem = TheoremId::T4;
    row.t = t;
    row.measured = mean_of(gaps);
    row.bound = theoretical_bound(TheoremId::T4, bc, -1.0, t);
    row.slack = 1.05;
    row.satisfied = row.measured <= row.slack * row.bound;
    report.rows.push_back(row);
  }

  // T6: smooth stochastic gradients with exact injected noise sigma
  {
    const double D_hat = 2.0 * (frechet_fx.r1 + frechet_fx.r_anch) + 2.0;
    auto oracle = with_spherical_noise(fm, frechet_oracle(frechet_fx.prob), noise);
    oracle.constants.D = D_hat;
    oracle.constants.L_g = 2.0 * zeta(-1.0, D_hat + frechet_fx.r_anch + 1.0);
    for (long t : checkpoints) {
      if (t < 2) continue;
      const auto preset = make_preset(TheoremId::T6, oracle.constants, -1.0, t);
      std::vector<double> gaps(n_seeds);
      std::vector<double> sups(n_seeds);
      parallel_for(jobs, n_seeds, [&](long i) {
        const auto stats = run_for_bound(preset, oracle, fm, frechet_fx.x1,
                                         seed + 3000 + i, frechet_fx.x_star,
                                         frechet_fx.f_star);
        gaps[i] = stats.gap;
        sups[i] = stats.sup_dist;
      });
      BoundCheckRow row;
      row.theorem = TheoremId::T6;
      row.t = t;
      row.measured = mean_of(gaps);
      row.bound = theoretical_bound(TheoremId::T6, oracle.constants, -1.0, t);
      row.slack = 1.05;
      row.satisfied = row.measured <= row.slack * row.bound &&
                      *std::max_element(sups.begin(), sups.end()) <= D_hat + 1e-9;
      report.rows.push_back(row);
    }
  }

  for (const auto& row : report.rows)
    if (!row.satisfied) report.all_satisfied = false;
  report.notes.push_back("stochastic bounds: mean over " + std::to_string(n_seeds) +
                         " seeds vs 1.05x bound");
  return report;
}

BoundReport verify_bounds_karcher(const ExperimentConfig& config) {
  BoundReport report;
  const KarcherProblem prob = generate_spd_dataset(config.n, config.N, config.Q,
                                                   config.seed);
  const SpdManifold m(config.n, config.kappa);
  const Matrix x1 = karcher_arithmetic_mean(prob);
  auto oracle = karcher_oracle(prob, false);
  const auto ref = reference_solution(
      m, oracle, {x1, karcher_log_euclidean_mean(prob), prob.matrices.front()},
      0.5 / *oracle.constants.L_g, config.tol, 100000);
  double d_max = m.distance(x1, ref.x);
  for (const auto& a : prob.matrices) d_max = std::max(d_max, m.distance(ref.x, a));
  oracle.constants.D = config.D ? *config.D : 2.0 * d_max;
  for (long t : {10L, 100L}) {
    const auto preset = make_preset(TheoremId::T7, oracle.constants, config.kappa, t);
    const auto stats = run_for_bound(preset, oracle, m, x1, config.seed, ref.x, ref.f);
    BoundCheckRow row;
    row.theorem = TheoremId::T7;
    row.t = t;
    row.measured = stats.gap;
    row.bound = theoretical_bound(TheoremId::T7, oracle.constants, config.kappa, t);
    row.satisfied = stats.gap <= row.bound + measurement_eps(ref.f);
    row.advisory = true;
    row.detail = "kappa and L_g are configured estimates, not derived constants";
    report.rows.push_back(row);
  }
  report.notes.push_back(
      "karcher bound check is advisory: the SPD curvature lower bound is configuration");
  return report;
}

} // namespace gcopt
