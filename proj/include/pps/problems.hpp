#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pps/system.hpp"

namespace pps {

/// Modal solution of the linear problem with A = [[2,1],[0,2]], B = I,
/// G = gamma = 0 on [-1, 1] with zero Dirichlet data:
///   u1 = sum e^{t a_n}(U1_n + t b_n U2_n) X_n,  u2 = sum e^{t a_n} U2_n X_n,
///   X_n = sin(n pi (x+1)/2), l_n = -(n pi/2)^2, a_n = -l_n/(1 - 2 l_n),
///   b_n = -a_n^2.
struct SeriesSolution {
  int M = 0;
  Vec U1, U2;             // coefficients n = 1..M (index n-1)
  Vec alpha, beta, lam;   // mode data
  /// Optional closed forms of the initial data, used to accelerate the sum.
  std::function<Vec(double x)> initial;
};

SeriesSolution make_series(const Vec& U1, const Vec& U2);

enum class PulseKind { Square, Hat };

/// U_n = int_{-1}^{1} U(x) X_n(x) dx for the square pulse (U1 = U2 = 1 on
/// |x| <= 1/2) and the hat (U1 = 1 - |x|, U2 = 0).
std::pair<Vec, Vec> pulse_coefficients(PulseKind kind, int M);

SeriesSolution pulse_series(PulseKind kind, int M);

struct SeriesValue {
  double u1 = 0.0;
  double u2 = 0.0;
  double tail_bound = 0.0;
};

/// Truncated sum. With `accelerated` and known initial data, the limit
/// e^{t/2}(U1 - t U2/4, U2) of the high modes is summed in closed form and
/// only the decaying remainder is truncated.
SeriesValue series_eval(const SeriesSolution& s, double x, double t,
                        bool accelerated = false);

/// Bound on the neglected modes: sum_{n>M} |U_n| e^{t/2} (1 + t a_n^2),
/// using the envelope C/n (square) or C/n^2 (hat) fitted on the last modes.
double series_tail_bound(const SeriesSolution& s, double t);

enum class RiemannFlux { Quadratic, Fractional };

/// Number of fractional-flux evaluations that hit lambda(u, v) = 0.
std::atomic<long>& fractional_flux_guard_hits();

/// lambda(u, v) = a v + (1 - a) v^2 + u^2 + (1 - u - v)^2 and
/// G = (u^2, v^2) / lambda, a = 0.1.
Vec fractional_flux(const Vec& u, double a = 0.1);
Mat fractional_flux_jacobian(const Vec& u, double a = 0.1);

/// Riemann data on [-56, 200]: A = diag(1/(1+u^2), 1/(1+v^2)), B = 0,
/// gamma = 0, zero Dirichlet data, U = (0.1, 0.9) for x <= 0, 0 otherwise.
SystemDef riemann_setup(RiemannFlux flux);

/// Exact solution callback: d x n values at physical points x at time t.
using ExactFn = std::function<Mat(const Vec& x, double t)>;

struct Problem {
  std::string id;
  SystemDef system;
  ExactFn exact;           // empty when no exact solution is known
  double T = 1.0;
  std::string default_scheme = "ssp22";
};

/// Registered ids: p1a, p1b, p2-square, p2-hat, riemann-quad,
/// riemann-fractional.
std::vector<std::string> problem_ids();
Problem make_problem(const std::string& id);

/// Exact solution of the smooth manufactured problems:
///   u1 = x + e^{-t} sin x,  u2 = (1 + t) sin x.
ExactSolution smooth_exact_solution();

}  // namespace pps
