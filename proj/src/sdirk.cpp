#include "pps/sdirk.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <memory>
#include <sstream>

#include "pps/errors.hpp"

namespace pps {

SdirkScheme SdirkScheme::from_id(const std::string& id) {
  if (id == "ssp22") return ssp22();
  if (id == "ssp23") return ssp23();
  throw ConfigError("unknown scheme '" + id + "' (expected ssp22 or ssp23)");
}

std::complex<double> stability_function(const SdirkScheme& s,
                                        std::complex<double> z) {
  using C = std::complex<double>;
  const Eigen::Matrix2d a = s.a();
  Eigen::Matrix2cd M = Eigen::Matrix2cd::Identity() - z * a.cast<C>();
  const Eigen::Vector2cd y = M.lu().solve(Eigen::Vector2cd::Ones());
  return C(1.0) + z * (s.b().cast<C>().dot(y));
}

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(T >= 0.0)) throw ConfigError("T must be non-negative");
  if (!(fp_tol > 0.0)) throw ConfigError("fp_tol must be positive");
  if (fp_max_iters < 1) throw ConfigError("fp_max_iters must be >= 1");
}

StageResult fixed_point_solve(const SemidiscreteOde& ode, const Vec& base,
                              double t_stage, double h,
                              const SolverConfig& cfg,
                              const BlockLU<double>* fixed_mass) {
  StageResult r;
  Vec u = base;
  Vec X;
  double residual = std::numeric_limits<double>::infinity();
  for (int nu = 0; nu < cfg.fp_max_iters; ++nu) {
    auto [K, F] = ode.evaluate(u, t_stage);
    if (fixed_mass)
      X = fixed_mass->solve(h * F);
    else
      X = BlockLU<double>(K, ode.block_size).solve(h * F);
    Vec next = X + base;
    residual = (next - u).lpNorm<Eigen::Infinity>();
    if (!std::isfinite(residual))
      throw SolverError("fixed-point iterate is not finite at t = " +
                        std::to_string(t_stage));
    u = std::move(next);
    r.iterations = nu + 1;
    if (residual <= cfg.fp_tol) {
      r.value = u;
      r.slope = h != 0.0 ? Vec(X / h) : Vec::Zero(u.size());
      return r;
    }
  }
  std::ostringstream msg;
  msg << "fixed-point iteration did not converge in " << cfg.fp_max_iters
      << " iterations at t = " << t_stage << " (last update " << residual
      << "); try a smaller dt";
  throw ConvergenceError(msg.str(), residual);
}

StepResult sdirk_step(const SdirkScheme& s, const SemidiscreteOde& ode,
                      const Vec& U, double t, double dt,
                      const SolverConfig& cfg,
                      const BlockLU<double>* fixed_mass) {
  const double h = s.mu * dt;
  const StageResult s1 = fixed_point_solve(ode, U, t + s.mu * dt, h, cfg,
                                           fixed_mass);
  const Vec base2 = U + (1.0 - 2.0 * s.mu) * dt * s1.slope;
  const StageResult s2 = fixed_point_solve(ode, base2, t + (1.0 - s.mu) * dt,
                                           h, cfg, fixed_mass);
  StepResult r;
  r.U = U + 0.5 * dt * (s1.slope + s2.slope);
  r.iterations = s1.iterations + s2.iterations;
  return r;
}

IntegrationResult integrate(const SdirkScheme& s, const SemidiscreteOde& ode,
                            const Vec& U0, double t0, const SolverConfig& cfg,
                            const StepObserver& observer) {
  cfg.validate();
  IntegrationResult r;
  r.U = U0;
  r.t = t0;
  const double span = cfg.T - t0;
  if (span <= 0.0) return r;
  const int steps = static_cast<int>(std::ceil(span / cfg.dt - 1e-9));

  std::unique_ptr<BlockLU<double>> fixed;
  if (ode.constant_mass && cfg.reuse_factorization) {
    const Mat K = ode.evaluate(U0, t0).first;
    fixed = std::make_unique<BlockLU<double>>(K, ode.block_size);
  }
  for (int k = 0; k < steps; ++k) {
    const double t_next = (k + 1 == steps) ? cfg.T : t0 + (k + 1) * cfg.dt;
    const StepResult st =
        sdirk_step(s, ode, r.U, r.t, t_next - r.t, cfg, fixed.get());
    r.U = st.U;
    r.t = t_next;
    r.steps = k + 1;
    r.fp_iters += st.iterations;
    if (!r.U.allFinite())
      throw SolverError("non-finite state at t = " + std::to_string(r.t));
    if (observer && !observer(r.t, r.U)) break;
  }
  return r;
}

namespace {

double spectral_norm(const Mat& M) {
  Eigen::JacobiSVD<Mat> svd(M);
  return svd.singularValues()(0);
}

}  // namespace

double ssp_max_dt(const Grid& g, double eps, double delta, double lip) {
  const int n = g.N - 1;
  const Mat D2 = g.D2.block(1, 1, n, n);
  const Mat D1 = g.D1.block(1, 1, n, n);
  const Mat C = Mat::Identity(n, n) - delta * D2;
  Eigen::PartialPivLU<Mat> lu(C);
  if (!(lu.rcond() > 1e-14))
    throw SingularMatrixError("ssp_max_dt: C = I - delta D2 is singular",
                              SingularBlock::Full, lu.rcond());
  const Mat P = lu.solve(D2);
  const double q = spectral_norm(lu.solve(D1));
  const Mat I = Mat::Identity(n, n);
  auto bound = [&](double dt) {
    return spectral_norm(I + eps * dt * P) + dt * lip * q;
  };
  const double slack = 1.0 + 1e-12;

  double lo = 0.0;
  double hi = 1e-8;
  if (bound(hi) > slack) {
    warn("ssp_max_dt: no positive time step satisfies the SSP bound");
    return 0.0;
  }
  while (bound(hi) <= slack) {
    lo = hi;
    hi *= 2.0;
    if (hi > kSspDtCap) return kSspDtCap;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bound(mid) <= slack ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace pps
