#pragma once

#include <complex>
#include <functional>
#include <string>
#include <utility>

#include "pps/block_lu.hpp"
#include "pps/spectral_grid.hpp"
#include "pps/system.hpp"

namespace pps {

/// Two-stage SDIRK tableau a = [[mu, 0], [1-2mu, mu]], b = [1/2, 1/2],
/// c = [mu, 1-mu].
struct SdirkScheme {
  std::string id;
  double mu = 0.5;
  int order = 2;

  Eigen::Matrix2d a() const {
    Eigen::Matrix2d m;
    m << mu, 0.0, 1.0 - 2.0 * mu, mu;
    return m;
  }
  Eigen::Vector2d b() const { return {0.5, 0.5}; }
  Eigen::Vector2d c() const { return {mu, 1.0 - mu}; }

  static SdirkScheme ssp22() { return {"ssp22", 0.5, 2}; }
  static SdirkScheme ssp23() {
    return {"ssp23", (3.0 + std::sqrt(3.0)) / 6.0, 3};
  }
  static SdirkScheme from_id(const std::string& id);
};

/// R(z) = 1 + z b^T (I - z a)^{-1} 1.
std::complex<double> stability_function(const SdirkScheme& s,
                                        std::complex<double> z);

struct SolverConfig {
  double dt = 0.1;
  double T = 1.0;
  double fp_tol = 1e-10;
  int fp_max_iters = 50;
  bool reuse_factorization = true;  // when the ODE reports a constant mass
  void validate() const;
};

/// K(U, t) dU/dt = F(U, t) in stacked form.
struct SemidiscreteOde {
  Eigen::Index size = 0;
  Eigen::Index block_size = 0;  // > 0 enables the 2x2 block solver
  bool constant_mass = false;
  std::function<std::pair<Mat, Vec>(const Vec& U, double t)> evaluate;
};

struct StageResult {
  Vec value;  // converged stage u*
  Vec slope;  // script-F(u*) = K^{-1} F at the last iterate
  int iterations = 0;
};

/// Iterates K(u_nu) X = h F(u_nu), u_{nu+1} = X + base from u_0 = base,
/// where h = mu * dt, until max|u_{nu+1} - u_nu| <= fp_tol.
/// `fixed_mass` (optional) is a factorization reused for every iterate.
StageResult fixed_point_solve(const SemidiscreteOde& ode, const Vec& base,
                              double t_stage, double h,
                              const SolverConfig& cfg,
                              const BlockLU<double>* fixed_mass = nullptr);

struct StepResult {
  Vec U;
  int iterations = 0;
};

StepResult sdirk_step(const SdirkScheme& s, const SemidiscreteOde& ode,
                      const Vec& U, double t, double dt,
                      const SolverConfig& cfg,
                      const BlockLU<double>* fixed_mass = nullptr);

struct IntegrationResult {
  Vec U;
  double t = 0.0;
  int steps = 0;
  int fp_iters = 0;
};

/// Observer is called after every step with (t, U); returning false stops.
using StepObserver = std::function<bool(double t, const Vec& U)>;

IntegrationResult integrate(const SdirkScheme& s, const SemidiscreteOde& ode,
                            const Vec& U0, double t0, const SolverConfig& cfg,
                            const StepObserver& observer = {});

/// Largest dt with
///   ||I + eps dt C^{-1} D2|| + dt lip ||C^{-1} D1|| <= 1,  C = I - delta D2,
/// using interior blocks of the LGL matrices and the induced 2-norm.
/// Returns kSspDtCap when the bound holds for every dt, and 0 (with a
/// warning) when no positive dt satisfies it.
inline constexpr double kSspDtCap = 1e6;
double ssp_max_dt(const Grid& g, double eps, double delta, double lip);

}  // namespace pps
