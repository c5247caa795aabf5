#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "pps/spectral_grid.hpp"
#include "pps/system.hpp"

namespace pps {

/// Interior nodal values of the homogenized unknown at time t.
/// U(p, k-1) = v_p(x_k, t), k = 1..N-1; boundary values are zero.
struct State {
  double t = 0.0;
  Mat U;
};

/// Stacked vector ordering: entry p*(N-1) + k for component p, interior node k.
Vec flatten(const Mat& U);
Mat unflatten(const Vec& v, int d);

/// d x (N+1) nodal values with zero boundary columns.
Mat with_zero_boundary(const Mat& U);

/// G-NI matrices of the semidiscrete system
///   (K0 + K2A) dU/dt = (K2B + K1G) U + H.
struct AssembledOperators {
  Mat K0;
  Mat K2A;
  Mat K2B;
  Mat K1G;
  Vec H;
};

/// Stiffness blocks sum_h c_pq(U_h) psi_j'(x_h) psi_k'(x_h) w_h, where
/// `nodal` holds the states at all N+1 nodes (d x (N+1)).
Mat assemble_K2(const Grid& g, const MatrixFn& coeff, const Mat& nodal);
Mat assemble_K2(const Grid& g, const MatrixFn& coeff, const State& s);

/// Transport blocks with rows w_j g_pq(U_j) psi_k'(x_j).
Mat assemble_K1(const Grid& g, const MatrixFn& dG, const Mat& nodal);
Mat assemble_K1(const Grid& g, const MatrixFn& dG, const State& s);

/// Load vector with entries w_j gamma_p(U_j, x_j, t).
Vec assemble_H(const Grid& g, const SourceFn& gamma, const Mat& nodal,
               double t);
Vec assemble_H(const Grid& g, const SourceFn& gamma, const State& s);

/// Diagonal mass matrix diag(w_1..w_{N-1}) repeated per component.
Mat assemble_K0(const Grid& g, int d);

/// Matrices reused across assemblies when A or B is state independent.
struct AssemblyCache {
  std::optional<Mat> K2A;
  std::optional<Mat> K2B;
};

/// Full assembly for a homogenized system. Coefficients are evaluated at
/// the total state v + lift (boundary nodes carry the lift values), and the
/// lift contributions are folded into H.
AssembledOperators assemble(const Grid& g, const HomogenizedSystem& hs,
                            const State& s, const AssemblyCache* cache = nullptr);

/// K = K0 + K2A and F = (K2B + K1G) U + H.
std::pair<Mat, Vec> semidiscrete_rhs(const AssembledOperators& ops,
                                     const State& s);

/// Interior nodal values of the homogenized initial data.
Mat initial_state(const Grid& g, const HomogenizedSystem& hs);

}  // namespace pps
