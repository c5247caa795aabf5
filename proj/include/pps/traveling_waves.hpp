#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace pps {

/// Traveling waves of u_t + (u^3)_x = eps u_xx + delta u_xxt.

enum class Regime { Balanced, Diffusive, Dispersive };
Regime regime_from_string(const std::string& s);
std::string to_string(Regime r);

/// Rankine-Hugoniot speed for f(u) = u^3: u-^2 + u- u+ + u+^2.
double shock_speed(double u_minus, double u_plus);

struct TravelingWaveProblem {
  double u_minus = 0.0;
  double u_plus = 0.0;
  Regime regime = Regime::Balanced;
  double alpha = 0.0;      // eps / sqrt(delta), balanced regime
  double eps_small = 0.0;  // expansion parameter, other regimes

  double lambda() const { return shock_speed(u_minus, u_plus); }
};

enum class EquilibriumType { Repulsor, Saddle, Attractor, Center, Degenerate };
std::string to_string(EquilibriumType t);

/// Eigenvalues of the linearization of
///   u' = v,  v' = (alpha/lambda) v + g(u) - g(u-),  g(u) = u - u^3/lambda
/// at (u, 0).
std::array<std::complex<double>, 2> phase_eigenvalues(double u, double lambda,
                                                      double alpha);
EquilibriumType classify(const std::array<std::complex<double>, 2>& mu);

struct EquilibriumReport {
  double u0 = 0.0, u1 = 0.0, u2 = 0.0;
  double delta1 = 0.0;  // 4 lambda - 3 u-^2
  std::array<EquilibriumType, 3> types{};
  std::array<std::array<std::complex<double>, 2>, 3> eigenvalues{};
};

/// u0 = u- and the roots of u^2 + u u- + u-^2 = lambda. Throws DomainError
/// when the roots are complex.
EquilibriumReport equilibria(double u_minus, double lambda, double alpha);

/// Speed lambda in (3u-^2/4, 3u-^2) for which u1 = -u- + (alpha/3) sqrt(2/lambda)
/// is an equilibrium of the balanced system. Throws PreconditionError when
/// no such lambda exists.
double balanced_speed(double u_minus, double alpha);

/// Balanced problem with u+ = u1 and lambda from balanced_speed.
TravelingWaveProblem balanced_problem(double u_minus, double alpha);

/// True when u- > (2/3) sqrt(2/lambda) alpha.
bool explicit_profile_valid(double u_minus, double alpha, double lambda);

/// The closed-form tanh profile
///   u(y) = c - (u- - c) tanh((u- - c) y sqrt(2 lambda)),  c = alpha/(3 sqrt(2 lambda)).
double explicit_profile(double u_minus, double alpha, double lambda, double y);

/// (u, u_y, u_yy) of the closed form.
std::array<double, 3> explicit_profile_derivatives(double u_minus,
                                                   double alpha,
                                                   double lambda, double y);

/// -lambda (u - u-) + (u^3 - u-^3) - (alpha u_y - lambda u_yy).
double cl4_residual(double u_minus, double alpha, double lambda, double u,
                    double u_y, double u_yy);

/// Hamiltonian of the alpha = 0 phase-plane system:
///   H = v^2/2 - (u^2/2 - u^4/(4 lambda) - g(u-) u).
double phase_hamiltonian(double u_minus, double lambda, double u, double v);

struct PhasePoint {
  double y = 0.0;
  double u = 0.0;
  double v = 0.0;
};

/// Classical RK4 on the phase-plane system with fixed step h (negative h
/// integrates backward). The observer returns false to stop.
PhasePoint integrate_phase(double u_minus, double lambda, double alpha,
                           PhasePoint start, double h, long steps,
                           const std::function<bool(const PhasePoint&)>& obs = {});

struct ShootingResult {
  bool connected = false;
  double closest_distance = 0.0;  // to (u0, 0)
  std::vector<PhasePoint> trajectory;  // increasing y, from u0 towards u1
  std::string message;
};

struct ShootingOptions {
  double h = 1e-3;
  double y_budget = 4000.0;
  double ball = 1e-6;
  int sample_every = 10;
};

/// Heteroclinic orbit from (u0, 0) to the saddle (u1, 0). The orbit is traced
/// backward in y from u1 along the branch of its stable manifold with u > u1
/// and then reversed.
ShootingResult shoot_connection(const TravelingWaveProblem& p,
                                const ShootingOptions& opt = {});

/// y where the sampled trajectory crosses `level` (linear interpolation).
double crossing_ordinate(const std::vector<PhasePoint>& traj, double level);

struct DiffusiveExpansion {
  double lambda = 0.0;
  std::vector<double> eta;
  std::vector<double> u0, u1, u2;
  std::array<double, 3> residual{};  // max residual per order
  int orders = 2;
};

struct ExpansionOptions {
  double eta_max = 40.0;
  double h = 1e-3;
};

/// Terms of u = u0 + eps u1 + eps^2 u2 for the diffusion-dominated profile,
/// pinned by u0(0) = (u- + u+)/2 and u1(0) = u2(0) = 0.
DiffusiveExpansion expand_diffusive(double u_minus, double u_plus, int orders,
                                    const ExpansionOptions& opt = {});

struct DispersiveCertificate {
  double lambda = 0.0;
  std::array<double, 3> states{};  // u-, u+, -(u- + u+)
  std::array<EquilibriumType, 3> types{};
  int saddles = 0;
  bool nonexistence = false;
};

/// In the dispersion-dominated limit the equilibria have eigenvalues
/// +-sqrt((lambda - 3u^2)/lambda): saddle if lambda > 3u^2, center if below.
DispersiveCertificate classify_dispersive(double u_minus, double u_plus);

}  // namespace pps
