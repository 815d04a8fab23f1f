// Command-line harness: seeded experiment runs, rate fits, theorem-bound
// verification, trigonometric-bound certification, and dataset generation.
//
// Exit codes: 0 ok, 1 usage/configuration error, 2 numerical failure,
// 3 bound or certification violation.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcopt/bench.hpp"
#include "gcopt/certify.hpp"
#include "gcopt/error.hpp"
#include "gcopt/problems/karcher.hpp"

namespace {

using namespace gcopt;

void add_common_flags(CLI::App* cmd, ExperimentConfig& cfg, std::string& config_path,
                      std::string& problem, std::string& d_flag) {
  cmd->add_option("--config", config_path, "flat key=value config file");
  cmd->add_option("--problem", problem,
                  "karcher|frechet|euclidean-quad|hyperbolic-dist");
  cmd->add_option("--algo", cfg.algo, "theorem id T1..T7 or alias gd|sgd-sm|sgd-st|"
                                      "subgrad|st-subgrad|ssubgrad|st-ssubgrad");
  cmd->add_option("--n", cfg.n, "matrix side / dimension");
  cmd->add_option("--N", cfg.N, "dataset size / anchor count");
  cmd->add_option("--Q", cfg.Q, "condition number (karcher)");
  cmd->add_option("--kappa", cfg.kappa, "curvature lower bound");
  cmd->add_option("--D", d_flag, "diameter override");
  cmd->add_option("--t", cfg.t, "horizon (passes for karcher, iterations otherwise)");
  cmd->add_option("--seed", cfg.seed, "base RNG seed");
  cmd->add_option("--repeat", cfg.repeat, "number of seeded repeats");
  cmd->add_option("--jobs", cfg.jobs, "parallel runs");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_option("--tol", cfg.tol, "reference-solve tolerance");
  cmd->add_flag("--gnuplot", cfg.gnuplot, "also write gnuplot-compatible .dat files");
}

ExperimentConfig resolve_config(const ExperimentConfig& flags,
                                const std::string& config_path,
                                const std::string& problem, const std::string& d_flag) {
  ExperimentConfig cfg = flags;
  if (!config_path.empty()) {
    // the config file replaces the flag set; an explicit --out still wins
    ExperimentConfig file_cfg = load_config(config_path);
    file_cfg.out_dir = flags.out_dir.empty() ? file_cfg.out_dir : flags.out_dir;
    cfg = file_cfg;
  }
  if (!problem.empty()) cfg.problem = problem_from_string(problem);
  if (!d_flag.empty()) cfg.D = std::stod(d_flag);
  return cfg;
}

// trace CSV reader for the fit subcommand (skips '#' comment lines)
std::vector<std::vector<double>> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 's') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_run(const ExperimentConfig& cfg) {
  const auto summary = run_experiment(cfg);
  std::cout.precision(10);
  for (const auto& note : summary.notes) std::cout << "# " << note << '\n';
  for (const auto& row : summary.rows) {
    std::cout << row.algo << " seed=" << row.seed << " t=" << row.horizon
              << " gap=" << row.gap;
    if (row.fit.n_points >= 3)
      std::cout << " " << to_string(row.fit.model) << "_slope=" << row.fit.slope
                << " r2=" << row.fit.r2;
    if (!row.trace_path.empty()) std::cout << " trace=" << row.trace_path;
    std::cout << '\n';
  }
  if (!summary.summary_path.empty())
    std::cout << "summary=" << summary.summary_path << '\n';
  return 0;
}

int cmd_fit(const std::string& path, const std::string& model_name, double lo,
            double hi, double ref) {
  const auto rows = read_trace_csv(path);
  std::vector<std::pair<double, double>> points;
  for (const auto& row : rows) {
    if (row.size() < 3) continue;
    const double f = std::isfinite(row[2]) ? row[2] : row[1]; // f_avg, else f_x
    points.emplace_back(row[0], f - ref);
  }
  if (hi <= 0.0 && !points.empty()) hi = points.back().first;
  const auto fit = fit_rate(points, fit_model_from_string(model_name), lo, hi);
  std::cout.precision(10);
  std::cout << to_string(fit.model) << " slope=" << fit.slope
            << " intercept=" << fit.intercept << " r2=" << fit.r2
            << " n_points=" << fit.n_points << " window=[" << fit.window_lo << ","
            << fit.window_hi << "]" << (fit.shrunk ? " (window shrunk)" : "") << '\n';
  return 0;
}

int cmd_verify_bounds(const ExperimentConfig& cfg, bool deterministic_only,
                      bool stochastic_only, int n_seeds) {
  const std::vector<long> checkpoints = {10, 100, 1000, 10000};
  bool violated = false;
  if (cfg.problem == ProblemKind::Karcher) {
    const auto report = verify_bounds_karcher(cfg);
    std::cout << to_string(report);
    return 0; // advisory only
  }
  if (!stochastic_only) {
    const auto report = verify_bounds_deterministic(cfg.seed, checkpoints);
    std::cout << to_string(report);
    violated = violated || !report.all_satisfied;
  }
  if (!deterministic_only) {
    const auto report = verify_bounds_stochastic(cfg.seed, n_seeds, checkpoints,
                                                 cfg.jobs);
    std::cout << to_string(report);
    violated = violated || !report.all_satisfied;
  }
  return violated ? 3 : 0;
}

int cmd_certify(long lemma_samples, long corollary_samples, long scaling_samples,
                Index grid_points, std::uint64_t seed, int jobs,
                const std::string& out_dir) {
  std::vector<CheckReport> reports;
  for (double kappa : {-0.25, -1.0, -4.0}) {
    reports.push_back(certify_lemma1_monte_carlo(kappa, lemma_samples, 5.0, seed, jobs));
    reports.push_back(certify_lemma1_equality_b0(kappa, 1000, seed));
  }
  reports.push_back(certify_corollary1_hyperbolic(-1.0, 3, corollary_samples, seed, jobs));
  reports.push_back(certify_corollary1_euclidean(3, corollary_samples, seed));
  GridSpec grid;
  grid.nb = grid.nc = grid.nA = grid_points;
  reports.push_back(certify_appendix_g_inequality(grid));
  reports.push_back(certify_curvature_scaling(scaling_samples, seed));

  std::cout << reports_to_text(reports);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream csv(std::filesystem::path(out_dir) / "certification.csv");
    csv << reports_to_csv(reports);
    std::ofstream txt(std::filesystem::path(out_dir) / "certification.txt");
    txt << reports_to_text(reports);
  }
  for (const auto& r : reports)
    if (!r.pass) return 3;
  return 0;
}

int cmd_gen_data(Index n, Index N, double Q, std::uint64_t seed,
                 const std::string& out_path) {
  const auto problem = generate_spd_dataset(n, N, Q, seed);
  save_dataset(out_path, problem);
  std::cout << "wrote " << out_path << " (n=" << n << " N=" << N << " Q=" << Q
            << " seed=" << seed << ")\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"first-order geodesically convex optimization toolkit"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string config_path, problem, d_flag;

  auto* run_cmd = app.add_subcommand("run", "run a seeded experiment");
  add_common_flags(run_cmd, cfg, config_path, problem, d_flag);

  auto* fit_cmd = app.add_subcommand("fit", "fit a convergence rate to a trace CSV");
  std::string fit_path, fit_model = "loglog";
  double fit_lo = 0.0, fit_hi = 0.0, fit_ref = 0.0;
  fit_cmd->add_option("--in", fit_path, "trace CSV")->required();
  fit_cmd->add_option("--model", fit_model, "loglog|semilog");
  fit_cmd->add_option("--window-lo", fit_lo, "window lower edge");
  fit_cmd->add_option("--window-hi", fit_hi, "window upper edge (0 = end of trace)");
  fit_cmd->add_option("--ref", fit_ref, "reference objective value");

  auto* vb_cmd = app.add_subcommand("verify-bounds", "check theorem bounds end to end");
  bool det_only = false, sto_only = false;
  int n_seeds = 50;
  add_common_flags(vb_cmd, cfg, config_path, problem, d_flag);
  vb_cmd->add_flag("--deterministic-only", det_only, "skip stochastic theorems");
  vb_cmd->add_flag("--stochastic-only", sto_only, "skip deterministic theorems");
  vb_cmd->add_option("--seeds", n_seeds, "seeds for the expectation protocol");

  auto* cert_cmd = app.add_subcommand("certify", "run the trig-bound certifications");
  long lemma_samples = 100000, corollary_samples = 10000, scaling_samples = 10000;
  Index grid_points = 100;
  std::uint64_t cert_seed = 42;
  int cert_jobs = 1;
  std::string cert_out;
  cert_cmd->add_option("--lemma-samples", lemma_samples, "triangles per curvature");
  cert_cmd->add_option("--corollary-samples", corollary_samples, "update tuples");
  cert_cmd->add_option("--scaling-samples", scaling_samples, "scaling identity samples");
  cert_cmd->add_option("--grid", grid_points, "grid points per axis");
  cert_cmd->add_option("--seed", cert_seed, "RNG seed");
  cert_cmd->add_option("--jobs", cert_jobs, "shards for Monte-Carlo sweeps");
  cert_cmd->add_option("--out", cert_out, "directory for report files");

  auto* gen_cmd = app.add_subcommand("gen-data", "generate an SPD dataset file");
  Index gen_n = 20, gen_N = 100;
  double gen_Q = 100.0;
  std::uint64_t gen_seed = 42;
  std::string gen_out = "dataset.txt";
  gen_cmd->add_option("--n", gen_n, "matrix side");
  gen_cmd->add_option("--N", gen_N, "matrix count");
  gen_cmd->add_option("--Q", gen_Q, "condition number");
  gen_cmd->add_option("--seed", gen_seed, "RNG seed");
  gen_cmd->add_option("--out", gen_out, "output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed())
      return cmd_run(resolve_config(cfg, config_path, problem, d_flag));
    if (fit_cmd->parsed())
      return cmd_fit(fit_path, fit_model, fit_lo, fit_hi, fit_ref);
    if (vb_cmd->parsed())
      return cmd_verify_bounds(resolve_config(cfg, config_path, problem, d_flag),
                               det_only, sto_only, n_seeds);
    if (cert_cmd->parsed())
      return cmd_certify(lemma_samples, corollary_samples, scaling_samples, grid_points,
                         cert_seed, cert_jobs, cert_out);
    if (gen_cmd->parsed()) return cmd_gen_data(gen_n, gen_N, gen_Q, gen_seed, gen_out);
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 1;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
