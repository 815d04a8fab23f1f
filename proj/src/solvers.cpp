#include "gcopt/solvers.hpp"

#include <cmath>
#include <sstream>

namespace gcopt {
namespace {

double require(const std::optional<double>& c, const char* theorem, const char* name) {
  if (!c)
    throw ConfigError(std::string(theorem) + " requires constant " + name);
  if (!(*c > 0.0) || !std::isfinite(*c))
    throw ConfigError(std::string(theorem) + ": constant " + name + " must be positive");
  return *c;
}

} // namespace

std::string to_string(TheoremId id) { return "T" + std::to_string(static_cast<int>(id)); }

TheoremId theorem_from_string(const std::string& s) {
  for (int i = 1; i <= 7; ++i)
    if (s == "T" + std::to_string(i) || s == "t" + std::to_string(i))
      return static_cast<TheoremId>(i);
  throw ConfigError("unknown theorem id: " + s);
}

double schedule_T1(double D, double L_f, double zeta_D, long t) {
  if (!(D > 0.0) || !(L_f > 0.0) || !(zeta_D >= 1.0) || t < 1)
    throw ConfigError("schedule_T1: constants must be positive, zeta >= 1, t >= 1");
  return D / (L_f * std::sqrt(zeta_D * static_cast<double>(t)));
}

double schedule_T2(double D, double G, double zeta_D, long t) {
  if (!(D > 0.0) || !(G > 0.0) || !(zeta_D >= 1.0) || t < 1)
    throw ConfigError("schedule_T2: constants must be positive, zeta >= 1, t >= 1");
  return D / (G * std::sqrt(zeta_D * static_cast<double>(t)));
}

double schedule_T3T4(long s, double mu) {
  if (!(mu > 0.0)) throw ConfigError("schedule_T3T4: mu must be positive");
  if (s < 1) throw ConfigError("schedule_T3T4: s must be >= 1");
  return 2.0 / (mu * static_cast<double>(s + 1));
}

double schedule_T5T7(double L_g) {
  if (!(L_g > 0.0)) throw ConfigError("schedule_T5T7: L_g must be positive");
  return 1.0 / L_g;
}

double schedule_T6(double L_g, double D, double sigma, double zeta_D, long t) {
  if (!(sigma > 0.0))
    throw ConfigError("schedule_T6: sigma must be positive (use T5 when sigma = 0)");
  if (!(L_g > 0.0) || !(D > 0.0) || !(zeta_D >= 1.0) || t < 1)
    throw ConfigError("schedule_T6: constants must be positive, zeta >= 1, t >= 1");
  const double alpha = (D / sigma) * std::sqrt(1.0 / (zeta_D * static_cast<double>(t)));
  return 1.0 / (L_g + 1.0 / alpha);
}

double averaging_T6_policy(long s, long t, double zeta_D) {
  if (t < 2) throw ConfigError("averaging_T6_policy: horizon t must be >= 2");
  if (s < 2 || s > t - 1)
    throw ConfigError("averaging_T6_policy: s must lie in [2, t-1]");
  if (s <= t - 2) return 1.0 / static_cast<double>(s);
  return zeta_D / (zeta_D + static_cast<double>(t - 2));
}

double theoretical_bound(TheoremId id, const OracleConstants& c, double kappa, long t) {
  if (t < 1) throw DomainError("theoretical_bound: t must be >= 1");
  const double td = static_cast<double>(t);
  switch (id) {
    case TheoremId::T1: {
      const double D = require(c.D, "T1 bound", "D");
      const double L = require(c.L_f, "T1 bound", "L_f");
      return D * L * std::sqrt(zeta(kappa, D) / td);
    }
    case TheoremId::T2: {
      const double D = require(c.D, "T2 bound", "D");
      const double G = require(c.G, "T2 bound", "G");
      return D * G * std::sqrt(zeta(kappa, D) / td);
    }
    case TheoremId::T3: {
      const double D = require(c.D, "T3 bound", "D");
      const double L = require(c.L_f, "T3 bound", "L_f");
      const double mu = require(c.mu, "T3 bound", "mu");
      return 2.0 * zeta(kappa, D) * L * L / (mu * (td + 1.0));
    }
    case TheoremId::T4: {
      const double D = require(c.D, "T4 bound", "D");
      const double G = require(c.G, "T4 bound", "G");
      const double mu = require(c.mu, "T4 bound", "mu");
      return 2.0 * zeta(kappa, D) * G * G / (mu * (td + 1.0));
    }
    case TheoremId::T5: {
      if (t <= 1) throw DomainError("T5 bound requires t > 1");
      const double D = require(c.D, "T5 bound", "D");
      const double L = require(c.L_g, "T5 bound", "L_g");
      const double z = zeta(kappa, D);
      return z * L * D * D / (2.0 * (z + td - 2.0));
    }
    case TheoremId::T6: {
      if (t <= 1) throw DomainError("T6 bound requires t > 1");
      const double D = require(c.D, "T6 bound", "D");
      const double L = require(c.L_g, "T6 bound", "L_g");
      const double sigma = require(c.sigma, "T6 bound", "sigma");
      const double z = zeta(kappa, D);
      return (z * L * D * D + 2.0 * D * sigma * std::sqrt(z * td)) /
             (2.0 * (z + td - 2.0));
    }
    case TheoremId::T7: {
      if (t <= 1) throw DomainError("T7 bound requires t > 1");
      const double D = require(c.D, "T7 bound", "D");
      const double L = require(c.L_g, "T7 bound", "L_g");
      const double mu = require(c.mu, "T7 bound", "mu");
      const double z = zeta(kappa, D);
      const double eps = std::min(1.0 / z, mu / L);
      return std::pow(1.0 - eps, static_cast<double>(t - 2)) * L * D * D / 2.0;
    }
  }
  throw ConfigError("theoretical_bound: unknown theorem id");
}

SolverPreset make_preset(TheoremId id, const OracleConstants& c, double kappa,
                         long horizon) {
  if (horizon < 1) throw ConfigError("make_preset: horizon must be >= 1");
  SolverPreset p;
  p.theorem = id;
  p.horizon = horizon;
  switch (id) {
    case TheoremId::T1: {
      const double D = require(c.D, "T1", "D");
      const double L = require(c.L_f, "T1", "L_f");
      p.zeta_D = zeta(kappa, D);
      const double eta = schedule_T1(D, L, p.zeta_D, horizon);
      p.step_schedule = [eta](long) { return eta; };
      p.averaging = Averaging::UniformStream;
      break;
    }
    case TheoremId::T2: {
      const double D = require(c.D, "T2", "D");
      const double G = require(c.G, "T2", "G");
      p.zeta_D = zeta(kappa, D);
      const double eta = schedule_T2(D, G, p.zeta_D, horizon);
      p.step_schedule = [eta](long) { return eta; };
      p.averaging = Averaging::UniformStream;
      break;
    }
    case TheoremId::T3:
    case TheoremId::T4: {
      const double mu = require(c.mu, "T3/T4", "mu");
      p.zeta_D = c.D ? zeta(kappa, *c.D) : 1.0;
      p.step_schedule = [mu](long s) { return schedule_T3T4(s, mu); };
      p.averaging = Averaging::Weighted2s;
      break;
    }
    case TheoremId::T5:
    case TheoremId::T7: {
      const double L = require(c.L_g, to_string(id).c_str(), "L_g");
      p.zeta_D = c.D ? zeta(kappa, *c.D) : 1.0;
      const double eta = schedule_T5T7(L);
      p.step_schedule = [eta](long) { return eta; };
      p.averaging = Averaging::NoneLastIterate;
      break;
    }
    case TheoremId::T6: {
      const double L = require(c.L_g, "T6", "L_g");
      const double D = require(c.D, "T6", "D");
      const double sigma = require(c.sigma, "T6", "sigma");
      if (horizon < 2) throw ConfigError("T6 requires horizon >= 2");
      p.zeta_D = zeta(kappa, D);
      const double eta = schedule_T6(L, D, sigma, p.zeta_D, horizon);
      p.step_schedule = [eta](long) { return eta; };
      p.averaging = Averaging::SmoothStochasticTail;
      break;
    }
  }
  return p;
}

std::string RunTrace::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "# theorem=" << to_string(theorem) << " seed=" << seed;
  if (!problem.empty()) out << " problem=" << problem;
  out << '\n' << "# constants:";
  auto emit = [&out](const char* name, const std::optional<double>& v) {
    if (v) out << ' ' << name << '=' << *v;
  };
  emit("L_f", constants.L_f);
  emit("L_g", constants.L_g);
  emit("mu", constants.mu);
  emit("G", constants.G);
  emit("sigma", constants.sigma);
  emit("D", constants.D);
  out << '\n' << "s,f_x,f_avg,eta,grad_norm,dist_to_ref\n";
  for (const auto& r : records) {
    out << r.s << ',' << r.f_x << ',' << r.f_avg << ',' << r.eta << ',' << r.grad_norm
        << ',' << r.dist_to_ref << '\n';
  }
  return out.str();
}

DescentReport check_descent(const RunTrace& trace, double L_g) {
  if (!(L_g > 0.0)) throw ConfigError("check_descent: L_g must be positive");
  DescentReport report;
  for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
    const auto& cur = trace.records[i];
    const auto& next = trace.records[i + 1];
    const double allowed = -cur.grad_norm * cur.grad_norm / (2.0 * L_g) +
                           1e-9 * (1.0 + std::abs(cur.f_x));
    const double actual = next.f_x - cur.f_x;
    if (actual > allowed) {
      report.violations.push_back(cur.s);
      report.worst_violation = std::max(report.worst_violation, actual - allowed);
      report.pass = false;
    }
  }
  return report;
}

} // namespace gcopt
