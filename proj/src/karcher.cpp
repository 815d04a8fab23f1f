#include "gcopt/problems/karcher.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace gcopt {
namespace {

// shared per-call cache of X^{1/2}, X^{-1/2}
struct SqrtPair {
  Matrix xs, xm;
};

SqrtPair sqrt_pair(const Matrix& x) {
  return SqrtPair{SpdManifold::sym_power(x, 0.5), SpdManifold::sym_power(x, -0.5)};
}

Matrix log_term(const SqrtPair& sp, const Matrix& a) {
  const Matrix w = SpdManifold::sym(sp.xm * a * sp.xm);
  return SpdManifold::sym(sp.xs * SpdManifold::sym_log(w) * sp.xs);
}

double loss_term(const SqrtPair& sp, const Matrix& a) {
  const Matrix w = SpdManifold::sym(sp.xm * a * sp.xm);
  Eigen::SelfAdjointEigenSolver<Matrix> es(w);
  double d2 = 0.0;
  for (Index i = 0; i < w.rows(); ++i) {
    const double lam = es.eigenvalues()[i];
    if (lam <= 1e-14)
      throw InvalidPointError("karcher: eigenvalue below floor in loss");
    const double l = std::log(lam);
    d2 += l * l;
  }
  return d2;
}

} // namespace

KarcherProblem generate_spd_dataset(Index n, Index N, double Q, std::uint64_t seed) {
  if (n < 2) throw ConfigError("generate_spd_dataset: n must be >= 2");
  if (N < 1) throw ConfigError("generate_spd_dataset: N must be >= 1");
  if (!(Q >= 1.0)) throw ConfigError("generate_spd_dataset: Q must be >= 1");
  KarcherProblem p;
  p.n = n;
  p.N = N;
  p.Q = Q;
  p.seed = seed;
  p.matrices.reserve(N);
  Rng rng(seed);
  const double log_lo = -std::log(Q);
  for (Index i = 0; i < N; ++i) {
    Matrix g(n, n);
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) g(r, c) = rng.normal();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix z = qr.householderQ();
    const Matrix r_mat = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index c = 0; c < n; ++c)
      if (r_mat(c, c) < 0.0) z.col(c) *= -1.0; // fix the sign convention
    Vector lam(n);
    lam[0] = 1.0 / Q;  // pins the condition number exactly
    lam[n - 1] = 1.0;  // unit spectral norm
    for (Index k = 1; k + 1 < n; ++k) lam[k] = std::exp(rng.uniform(log_lo, 0.0));
    std::sort(lam.data(), lam.data() + n);
    p.matrices.push_back(SpdManifold::sym(z * lam.asDiagonal() * z.transpose()));
  }
  return p;
}

double karcher_loss(const Matrix& x, const KarcherProblem& p) {
  const SqrtPair sp = sqrt_pair(x);
  double total = 0.0;
  for (const auto& a : p.matrices) total += loss_term(sp, a);
  return total;
}

SpdManifold::Tangent karcher_full_gradient(const Matrix& x, const KarcherProblem& p) {
  const SqrtPair sp = sqrt_pair(x);
  Matrix g = Matrix::Zero(p.n, p.n);
  for (const auto& a : p.matrices) g -= 2.0 * log_term(sp, a);
  return SpdManifold::Tangent{x, g};
}

SpdManifold::Tangent karcher_index_gradient(const Matrix& x, const KarcherProblem& p,
                                            Index i) {
  if (i < 0 || i >= p.N)
    throw ContractViolation("karcher_index_gradient: index out of range");
  const SqrtPair sp = sqrt_pair(x);
  const Matrix g = -2.0 * static_cast<double>(p.N) * log_term(sp, p.matrices[i]);
  return SpdManifold::Tangent{x, g};
}

SpdManifold::Tangent karcher_stochastic_gradient(const Matrix& x, const KarcherProblem& p,
                                                 Rng& rng) {
  return karcher_index_gradient(x, p, rng.uniform_int(p.N));
}

Matrix karcher_arithmetic_mean(const KarcherProblem& p) {
  Matrix m = Matrix::Zero(p.n, p.n);
  for (const auto& a : p.matrices) m += a;
  return m / static_cast<double>(p.N);
}

Matrix karcher_log_euclidean_mean(const KarcherProblem& p) {
  Matrix m = Matrix::Zero(p.n, p.n);
  for (const auto& a : p.matrices) m += SpdManifold::sym_log(a);
  return SpdManifold::sym_exp(m / static_cast<double>(p.N));
}

void save_dataset(const std::string& path, const KarcherProblem& p) {
  std::ofstream out(path);
  if (!out) throw ConfigError("save_dataset: cannot open " + path);
  out.precision(17);
  out << "spd " << p.n << ' ' << p.N << ' ' << p.Q << ' ' << p.seed << '\n';
  for (const auto& a : p.matrices) {
    for (Index r = 0; r < p.n; ++r) {
      for (Index c = 0; c < p.n; ++c) {
        if (c) out << ' ';
        out << a(r, c);
      }
      out << '\n';
    }
  }
}

KarcherProblem load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_dataset: cannot open " + path);
  std::string magic;
  KarcherProblem p;
  in >> magic >> p.n >> p.N >> p.Q >> p.seed;
  if (magic != "spd" || !in)
    throw ConfigError("load_dataset: malformed header in " + path);
  p.matrices.resize(p.N, Matrix(p.n, p.n));
  for (Index i = 0; i < p.N; ++i)
    for (Index r = 0; r < p.n; ++r)
      for (Index c = 0; c < p.n; ++c)
        if (!(in >> p.matrices[i](r, c)))
          throw ConfigError("load_dataset: truncated data in " + path);
  return p;
}

FirstOrderOracle<SpdManifold> karcher_oracle(const KarcherProblem& p, bool stochastic) {
  auto shared = std::make_shared<KarcherProblem>(p);
  FirstOrderOracle<SpdManifold> oracle;
  oracle.objective = [shared](const Matrix& x) { return karcher_loss(x, *shared); };
  if (stochastic) {
    oracle.gradient = [shared](const Matrix& x, Rng& rng) {
      return karcher_stochastic_gradient(x, *shared, rng);
    };
    oracle.deterministic = false;
  } else {
    oracle.gradient = [shared](const Matrix& x, Rng&) {
      return karcher_full_gradient(x, *shared);
    };
    oracle.deterministic = true;
  }
  oracle.constants.L_g = 5.0 * static_cast<double>(p.N);
  oracle.constants.mu = 2.0 * static_cast<double>(p.N);
  return oracle;
}

} // namespace gcopt
