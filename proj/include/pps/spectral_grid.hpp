#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "pps/errors.hpp"
#include "pps/legendre.hpp"

namespace pps {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Legendre-Gauss-Lobatto grid of degree N on [-1, 1].
template <typename Scalar>
struct SpectralGrid {
  int N = 0;
  VectorX<Scalar> nodes;    // N+1 ascending, nodes(0) = -1, nodes(N) = 1
  VectorX<Scalar> weights;  // N+1 positive, sum 2
  MatrixX<Scalar> D1;       // first-derivative collocation matrix
  MatrixX<Scalar> D2;       // D1 * D1

  int size() const { return N + 1; }
  /// Interior slice of D1 (all rows, columns 1..N-1).
  auto D1_interior_cols() const { return D1.middleCols(1, N - 1); }
};

/// Legendre expansion coefficients u_k, k = 0..N.
template <typename Scalar>
using ModalCoeffs = VectorX<Scalar>;

template <typename Scalar>
SpectralGrid<Scalar> build_grid(int N) {
  using std::abs;
  using std::cos;
  if (N < 2) throw DomainError("build_grid: N must be >= 2");
  SpectralGrid<Scalar> g;
  g.N = N;
  g.nodes.resize(N + 1);
  g.weights.resize(N + 1);
  g.nodes(0) = Scalar(-1);
  g.nodes(N) = Scalar(1);

  const Scalar nn1 = Scalar(N) * Scalar(N + 1);
  for (int j = 1; j < N; ++j) {
    Scalar x = -cos(std::numbers::pi_v<Scalar> * Scalar(j) / Scalar(N));
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_eval_with_derivative<Scalar>(N, x);
      // L_N'' from the Legendre equation
      const Scalar d2p = (Scalar(2) * x * dp - nn1 * p) / (Scalar(1) - x * x);
      const Scalar step = dp / d2p;
      x -= step;
      if (abs(step) < Scalar(1e-14)) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw ConvergenceError(
          "build_grid: Newton iteration failed at node " + std::to_string(j),
          0.0);
    g.nodes(j) = x;
  }
  for (int j = 1; j < N / 2 + 1; ++j) {
    const Scalar m = (g.nodes(N - j) - g.nodes(j)) / Scalar(2);
    g.nodes(N - j) = m;
    g.nodes(j) = -m;
  }
  if (N % 2 == 0) g.nodes(N / 2) = Scalar(0);

  VectorX<Scalar> LN(N + 1);
  for (int j = 0; j <= N; ++j) {
    LN(j) = legendre_eval<Scalar>(N, g.nodes(j));
    g.weights(j) = Scalar(2) / (nn1 * LN(j) * LN(j));
  }

  g.D1 = MatrixX<Scalar>::Zero(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) {
    Scalar row = 0;
    for (int j = 0; j <= N; ++j) {
      if (i == j) continue;
      g.D1(i, j) = LN(i) / (LN(j) * (g.nodes(i) - g.nodes(j)));
      row += g.D1(i, j);
    }
    g.D1(i, i) = -row;
  }
  g.D2 = g.D1 * g.D1;
  return g;
}

/// Lagrange basis function psi_j at x.
template <typename Scalar>
Scalar nodal_basis(const SpectralGrid<Scalar>& g, int j, Scalar x) {
  if (j < 0 || j > g.N) throw DomainError("nodal_basis: index out of range");
  Scalar p(1);
  for (int m = 0; m <= g.N; ++m)
    if (m != j) p *= (x - g.nodes(m)) / (g.nodes(j) - g.nodes(m));
  return p;
}

/// psi_j'(x). At the nodes this coincides with column j of D1.
template <typename Scalar>
Scalar nodal_basis_deriv(const SpectralGrid<Scalar>& g, int j, Scalar x) {
  if (j < 0 || j > g.N)
    throw DomainError("nodal_basis_deriv: index out of range");
  for (int k = 0; k <= g.N; ++k)
    if (x == g.nodes(k)) return g.D1(k, j);
  Scalar sum(0);
  for (int m = 0; m <= g.N; ++m) {
    if (m == j) continue;
    Scalar p = Scalar(1) / (g.nodes(j) - g.nodes(m));
    for (int l = 0; l <= g.N; ++l)
      if (l != j && l != m) p *= (x - g.nodes(l)) / (g.nodes(j) - g.nodes(l));
    sum += p;
  }
  return sum;
}

/// Discrete Legendre projection: u_k = (u, L_k)_N / ||L_k||^2, with the
/// inner product evaluated by LGL quadrature and the exact norm 2/(2k+1).
/// Exact on polynomials of degree <= N-1; the degree-N mode is aliased.
template <typename Scalar>
ModalCoeffs<Scalar> project_l2(const SpectralGrid<Scalar>& g,
                               const VectorX<Scalar>& samples) {
  if (samples.size() != g.N + 1)
    throw DomainError("project_l2: expected N+1 samples");
  ModalCoeffs<Scalar> c(g.N + 1);
  for (int k = 0; k <= g.N; ++k) {
    Scalar s(0);
    for (int j = 0; j <= g.N; ++j)
      s += g.weights(j) * samples(j) * legendre_eval<Scalar>(k, g.nodes(j));
    c(k) = s * Scalar(2 * k + 1) / Scalar(2);
  }
  return c;
}

template <typename Scalar>
Scalar reconstruct(const ModalCoeffs<Scalar>& c, Scalar x) {
  Scalar s(0);
  for (int k = 0; k < c.size(); ++k) s += c(k) * legendre_eval<Scalar>(k, x);
  return s;
}

/// Maps reference nodes to [xL, xR].
template <typename Scalar>
VectorX<Scalar> physical_nodes(const SpectralGrid<Scalar>& g, Scalar xL,
                               Scalar xR) {
  return (xL + (g.nodes.array() + Scalar(1)) * (xR - xL) / Scalar(2)).matrix();
}

using Grid = SpectralGrid<double>;

}  // namespace pps
