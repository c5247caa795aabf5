#include "pps/traveling_waves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pps/errors.hpp"

namespace pps {

Regime regime_from_string(const std::string& s) {
  if (s == "balanced") return Regime::Balanced;
  if (s == "diffusive") return Regime::Diffusive;
  if (s == "dispersive") return Regime::Dispersive;
  throw ConfigError("unknown regime '" + s + "'");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Balanced: return "balanced";
    case Regime::Diffusive: return "diffusive";
    case Regime::Dispersive: return "dispersive";
  }
  return "?";
}

std::string to_string(EquilibriumType t) {
  switch (t) {
    case EquilibriumType::Repulsor: return "repulsor";
    case EquilibriumType::Saddle: return "saddle";
    case EquilibriumType::Attractor: return "attractor";
    case EquilibriumType::Center: return "center";
    case EquilibriumType::Degenerate: return "degenerate";
  }
  return "?";
}

double shock_speed(double a, double b) { return a * a + a * b + b * b; }

std::array<std::complex<double>, 2> phase_eigenvalues(double u, double lambda,
                                                      double alpha) {
  const double disc =
      alpha * alpha / (lambda * lambda) + 4.0 * (1.0 - 3.0 * u * u / lambda);
  const std::complex<double> root = std::sqrt(std::complex<double>(disc, 0.0));
  const double half = 0.5 * alpha / lambda;
  return {half + 0.5 * root, half - 0.5 * root};
}

EquilibriumType classify(const std::array<std::complex<double>, 2>& mu) {
  const double tol = 1e-14;
  const double r0 = mu[0].real(), r1 = mu[1].real();
  if (std::abs(mu[0]) < tol || std::abs(mu[1]) < tol)
    return EquilibriumType::Degenerate;
  if (std::abs(r0) < tol && std::abs(r1) < tol) return EquilibriumType::Center;
  if (r0 > tol && r1 > tol) return EquilibriumType::Repulsor;
  if (r0 < -tol && r1 < -tol) return EquilibriumType::Attractor;
  if (r0 * r1 < 0.0) return EquilibriumType::Saddle;
  return EquilibriumType::Degenerate;
}

EquilibriumReport equilibria(double um, double lambda, double alpha) {
  EquilibriumReport r;
  r.delta1 = 4.0 * lambda - 3.0 * um * um;
  if (r.delta1 < 0.0)
    throw DomainError("equilibria: complex roots (4 lambda - 3 u-^2 < 0)");
  const double sq = std::sqrt(r.delta1);
  r.u0 = um;
  r.u1 = 0.5 * (-um + sq);
  r.u2 = 0.5 * (-um - sq);
  const std::array<double, 3> us{r.u0, r.u1, r.u2};
  for (int i = 0; i < 3; ++i) {
    r.eigenvalues[i] = phase_eigenvalues(us[i], lambda, alpha);
    r.types[i] = classify(r.eigenvalues[i]);
  }
  return r;
}

namespace {

double formula_u1(double um, double alpha, double lambda) {
  return -um + alpha / 3.0 * std::sqrt(2.0 / lambda);
}

}  // namespace

double balanced_speed(double um, double alpha) {
  if (!(um > 0.0)) throw PreconditionError("balanced_speed: requires u- > 0");
  auto f = [&](double lam) {
    const double u1 = formula_u1(um, alpha, lam);
    return u1 * u1 + u1 * um + um * um - lam;
  };
  double lo = 0.75 * um * um * (1.0 + 1e-12);
  double hi = 3.0 * um * um;
  double flo = f(lo), fhi = f(hi);
  if (flo * fhi > 0.0)
    throw PreconditionError("balanced_speed: no admissible speed for u- = " +
                            std::to_string(um) +
                            ", alpha = " + std::to_string(alpha));
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TravelingWaveProblem balanced_problem(double um, double alpha) {
  const double lam = balanced_speed(um, alpha);
  TravelingWaveProblem p;
  p.u_minus = um;
  p.u_plus = formula_u1(um, alpha, lam);
  p.alpha = alpha;
  p.regime = Regime::Balanced;
  return p;
}

bool explicit_profile_valid(double um, double alpha, double lambda) {
  return lambda > 0.0 && um > 2.0 / 3.0 * std::sqrt(2.0 / lambda) * alpha;
}

std::array<double, 3> explicit_profile_derivatives(double um, double alpha,
                                                   double lambda, double y) {
  if (!explicit_profile_valid(um, alpha, lambda))
    throw PreconditionError(
        "explicit_profile: requires u- > (2/3) sqrt(2/lambda) alpha");
  const double c = alpha / (3.0 * std::sqrt(2.0 * lambda));
  const double a = um - c;
  const double k = a * std::sqrt(2.0 * lambda);
  const double T = std::tanh(k * y);
  const double sech2 = 1.0 - T * T;
  return {c - a * T, -a * k * sech2, 2.0 * a * k * k * T * sech2};
}

double explicit_profile(double um, double alpha, double lambda, double y) {
  return explicit_profile_derivatives(um, alpha, lambda, y)[0];
}

double cl4_residual(double um, double alpha, double lambda, double u,
                    double uy, double uyy) {
  return -lambda * (u - um) + (u * u * u - um * um * um) -
         (alpha * uy - lambda * uyy);
}

double phase_hamiltonian(double um, double lambda, double u, double v) {
  const double gm = um - um * um * um / lambda;
  return 0.5 * v * v -
         (0.5 * u * u - u * u * u * u / (4.0 * lambda) - gm * u);
}

PhasePoint integrate_phase(double um, double lambda, double alpha,
                           PhasePoint p, double h, long steps,
                           const std::function<bool(const PhasePoint&)>& obs) {
  const double gm = um - um * um * um / lambda;
  auto rhs = [&](double u, double v, double& du, double& dv) {
    du = v;
    dv = alpha / lambda * v + (u - u * u * u / lambda) - gm;
  };
  for (long s = 0; s < steps; ++s) {
    double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
    rhs(p.u, p.v, k1u, k1v);
    rhs(p.u + 0.5 * h * k1u, p.v + 0.5 * h * k1v, k2u, k2v);
    rhs(p.u + 0.5 * h * k2u, p.v + 0.5 * h * k2v, k3u, k3v);
    rhs(p.u + h * k3u, p.v + h * k3v, k4u, k4v);
    p.u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    p.v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    p.y += h;
    if (!std::isfinite(p.u) || !std::isfinite(p.v) ||
        std::abs(p.u) + std::abs(p.v) > 1e8)
      throw SolverError("phase-plane integration blew up at y = " +
                        std::to_string(p.y));
    if (obs && !obs(p)) break;
  }
  return p;
}

ShootingResult shoot_connection(const TravelingWaveProblem& prob,
                                const ShootingOptions& opt) {
  if (prob.regime != Regime::Balanced)
    throw PreconditionError("shoot_connection: balanced regime only");
  const double um = prob.u_minus;
  const double lam = prob.lambda();
  const double alpha = prob.alpha;
  if (!(lam > 0.0)) throw PreconditionError("shoot_connection: lambda <= 0");
  if (!explicit_profile_valid(um, alpha, lam))
    throw PreconditionError(
        "shoot_connection: requires u- > (2/3) sqrt(2/lambda) alpha");
  const EquilibriumReport eq = equilibria(um, lam, alpha);
  if (eq.types[1] != EquilibriumType::Saddle)
    throw PreconditionError("shoot_connection: (u1, 0) is not a saddle");

  // Stable eigenvector of the saddle: (1, mu_-), mu_- < 0.
  const double mu_s = eq.eigenvalues[1][1].real();
  const double eta = 1e-6 * std::abs(eq.u0 - eq.u1);
  const double nrm = std::sqrt(1.0 + mu_s * mu_s);
  PhasePoint start{0.0, eq.u1 + eta / nrm, eta * mu_s / nrm};

  ShootingResult res;
  std::vector<PhasePoint> back{start};
  double closest = std::hypot(start.u - eq.u0, start.v);
  long counter = 0;
  bool hit = false;
  const long steps = static_cast<long>(opt.y_budget / opt.h);
  integrate_phase(um, lam, alpha, start, -opt.h, steps,
                  [&](const PhasePoint& p) {
                    const double dist = std::hypot(p.u - eq.u0, p.v);
                    closest = std::min(closest, dist);
                    if (++counter % opt.sample_every == 0) back.push_back(p);
                    if (dist < opt.ball) {
                      back.push_back(p);
                      hit = true;
                      return false;
                    }
                    return true;
                  });
  res.closest_distance = closest;
  res.connected = hit;
  std::reverse(back.begin(), back.end());
  res.trajectory = std::move(back);
  res.message = hit ? "connection found"
                    : "no approach to (u0, 0) within the y budget; closest "
                      "distance " + std::to_string(closest);
  return res;
}

double crossing_ordinate(const std::vector<PhasePoint>& traj, double level) {
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double a = traj[i - 1].u - level, b = traj[i].u - level;
    if (a == 0.0) return traj[i - 1].y;
    if (a * b < 0.0) {
      const double s = a / (a - b);
      return traj[i - 1].y + s * (traj[i].y - traj[i - 1].y);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

struct Orders {
  double u0, u1, u2;
};

/// Right-hand sides of the order-0..2 equations with the derivatives of the
/// lower orders expressed through the state.
Orders expansion_rhs(double um, double lam, const Orders& s) {
  const double um3 = um * um * um;
  const double d0 = -lam * (s.u0 - um) + (s.u0 * s.u0 * s.u0 - um3);
  const double c = 3.0 * s.u0 * s.u0 - lam;
  const double dd0 = c * d0;
  const double dc = 6.0 * s.u0 * d0;
  const double ddd0 = dc * d0 + c * dd0;
  const double d1 = c * s.u1 + lam * dd0;
  const double dd1 = dc * s.u1 + c * d1 + lam * ddd0;
  const double d2 = c * s.u2 + 3.0 * s.u0 * s.u1 * s.u1 + lam * dd1;
  return {d0, d1, d2};
}

Orders rk4(double um, double lam, const Orders& s, double h) {
  auto add = [](const Orders& a, const Orders& b, double f) {
    return Orders{a.u0 + f * b.u0, a.u1 + f * b.u1, a.u2 + f * b.u2};
  };
  const Orders k1 = expansion_rhs(um, lam, s);
  const Orders k2 = expansion_rhs(um, lam, add(s, k1, 0.5 * h));
  const Orders k3 = expansion_rhs(um, lam, add(s, k2, 0.5 * h));
  const Orders k4 = expansion_rhs(um, lam, add(s, k3, h));
  return {s.u0 + h / 6.0 * (k1.u0 + 2 * k2.u0 + 2 * k3.u0 + k4.u0),
          s.u1 + h / 6.0 * (k1.u1 + 2 * k2.u1 + 2 * k3.u1 + k4.u1),
          s.u2 + h / 6.0 * (k1.u2 + 2 * k2.u2 + 2 * k3.u2 + k4.u2)};
}

/// Max over interior points of |D6 f - rhs|, with sixth-order central
/// differences.
double fd_residual(const std::vector<double>& f, const std::vector<double>& rhs,
                   double h) {
  double worst = 0.0;
  for (std::size_t i = 3; i + 3 < f.size(); ++i) {
    const double d = (-f[i - 3] + 9.0 * f[i - 2] - 45.0 * f[i - 1] +
                      45.0 * f[i + 1] - 9.0 * f[i + 2] + f[i + 3]) /
                     (60.0 * h);
    worst = std::max(worst, std::abs(d - rhs[i]));
  }
  return worst;
}

}  // namespace

DiffusiveExpansion expand_diffusive(double um, double up, int orders,
                                    const ExpansionOptions& opt) {
  if (orders < 0 || orders > 2)
    throw PreconditionError("expand_diffusive: orders must be 0, 1 or 2");
  DiffusiveExpansion out;
  out.orders = orders;
  const double lam = shock_speed(um, up);
  out.lambda = lam;
  const long half = static_cast<long>(std::llround(opt.eta_max / opt.h));
  const std::size_t n = static_cast<std::size_t>(2 * half + 1);
  out.eta.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.eta[i] = (static_cast<long>(i) - half) * opt.h;

  if (um == up) {
    out.u0.assign(n, um);
    out.u1.assign(n, 0.0);
    out.u2.assign(n, 0.0);
    return out;
  }
  if (!(um > up))
    throw PreconditionError("expand_diffusive: requires u- > u+");
  if (!(3.0 * um * um > lam && lam > 3.0 * up * up))
    throw PreconditionError(
        "expand_diffusive: Lax condition 3u-^2 > lambda > 3u+^2 violated");

  std::vector<Orders> s(n);
  s[half] = {0.5 * (um + up), 0.0, 0.0};
  for (long i = half; i + 1 < static_cast<long>(n); ++i)
    s[i + 1] = rk4(um, lam, s[i], opt.h);
  for (long i = half; i > 0; --i) s[i - 1] = rk4(um, lam, s[i], -opt.h);

  out.u0.resize(n);
  out.u1.resize(n);
  out.u2.resize(n);
  std::vector<double> r0(n), r1(n), r2(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.u0[i] = s[i].u0;
    out.u1[i] = orders >= 1 ? s[i].u1 : 0.0;
    out.u2[i] = orders >= 2 ? s[i].u2 : 0.0;
    const Orders r = expansion_rhs(um, lam, s[i]);
    r0[i] = r.u0;
    r1[i] = r.u1;
    r2[i] = r.u2;
  }
  for (std::size_t i = 1; i < n; ++i)
    if (out.u0[i] > out.u0[i - 1] + 1e-12)
      throw SolverError("expand_diffusive: order-0 profile is not monotone");

  out.residual[0] = fd_residual(out.u0, r0, opt.h);
  if (orders >= 1) out.residual[1] = fd_residual(out.u1, r1, opt.h);
  if (orders >= 2) out.residual[2] = fd_residual(out.u2, r2, opt.h);
  return out;
}

DispersiveCertificate classify_dispersive(double um, double up) {
  if (um == up)
    throw PreconditionError("classify_dispersive: requires u- != u+");
  DispersiveCertificate c;
  c.lambda = shock_speed(um, up);
  c.states = {um, up, -(um + up)};
  for (int i = 0; i < 3; ++i) {
    const double s = c.lambda - 3.0 * c.states[i] * c.states[i];
    if (s > 0.0) {
      c.types[i] = EquilibriumType::Saddle;
      ++c.saddles;
    } else if (s < 0.0) {
      c.types[i] = EquilibriumType::Center;
    } else {
      c.types[i] = EquilibriumType::Degenerate;
    }
  }
  c.nonexistence = c.saddles <= 1;
  return c;
}

}  // namespace pps
