#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcopt/manifolds/spd.hpp"
#include "gcopt/solvers.hpp"

namespace gcopt {

/// Karcher-mean instance: N unit-spectral-norm SPD matrices of size n x n.
/// The objective is f(X) = sum_i d^2(X, A_i) under the affine-invariant
/// metric; it is geodesically 2N-strongly convex.
struct KarcherProblem {
  Index n = 0;
  Index N = 0;
  double Q = 1.0;
  std::uint64_t seed = 0;
  std::vector<Matrix> matrices;
};

/// Seeded generator. Each A_i = Z diag(lambda) Z^T with Z a random orthogonal
/// basis (QR of a standard-normal matrix, sign-fixed) and eigenvalues
/// log-uniform on [1/Q, 1] with both endpoints pinned, so the condition
/// number is exactly Q and the spectral norm exactly 1.
KarcherProblem generate_spd_dataset(Index n, Index N, double Q, std::uint64_t seed);

double karcher_loss(const Matrix& x, const KarcherProblem& p);

/// Riemannian gradient of the squared-distance sum: -2 sum_i Log_X(A_i).
SpdManifold::Tangent karcher_full_gradient(const Matrix& x, const KarcherProblem& p);

/// Gradient contribution of one dataset index scaled by N: -2N Log_X(A_i).
/// The uniform average over i equals the full gradient exactly.
SpdManifold::Tangent karcher_index_gradient(const Matrix& x, const KarcherProblem& p,
                                            Index i);

/// Single uniformly-drawn index gradient (the stochastic oracle).
SpdManifold::Tangent karcher_stochastic_gradient(const Matrix& x, const KarcherProblem& p,
                                                 Rng& rng);

/// Arithmetic mean of the dataset (the experiment's initializer).
Matrix karcher_arithmetic_mean(const KarcherProblem& p);

/// expm of the mean of logms (log-Euclidean mean); a second starting point
/// for multi-start reference solves.
Matrix karcher_log_euclidean_mean(const KarcherProblem& p);

/// Portable text serialization: header "spd n N Q seed", then N matrices
/// row-major with 17 significant digits.
void save_dataset(const std::string& path, const KarcherProblem& p);
KarcherProblem load_dataset(const std::string& path);

/// Oracle wrapper with constants L_g = 5N (empirical smoothness estimate,
/// see README) and mu = 2N.
FirstOrderOracle<SpdManifold> karcher_oracle(const KarcherProblem& p, bool stochastic);

} // namespace gcopt
