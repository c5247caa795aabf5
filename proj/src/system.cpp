#include "pps/system.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>
#include <mutex>

#include "pps/errors.hpp"

namespace pps {

void warn(const std::string& message) {
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  std::cerr << "warning: " << message << '\n';
}

SystemDef with_defaults(SystemDef sys) {
  const int d = sys.d;
  if (d < 1) throw ConfigError("system dimension must be >= 1");
  if (!(sys.xL < sys.xR)) throw ConfigError("domain requires xL < xR");
  if (!sys.A) {
    sys.A = [d](const Vec&) { return Mat::Zero(d, d); };
    sys.constant_A = true;
  }
  if (!sys.B) {
    sys.B = [d](const Vec&) { return Mat::Zero(d, d); };
    sys.constant_B = true;
  }
  if (!sys.G) {
    sys.G = [d](const Vec&) { return Vec::Zero(d); };
    if (!sys.dG) sys.dG = [d](const Vec&) { return Mat::Zero(d, d); };
  }
  if (!sys.gamma) sys.gamma = [d](const Vec&, double, double) { return Vec::Zero(d); };
  if (!sys.gL) sys.gL = [d](double) { return Vec::Zero(d); };
  if (!sys.gR) sys.gR = [d](double) { return Vec::Zero(d); };
  if (!sys.u0) sys.u0 = [d](double) { return Vec::Zero(d); };
  return sys;
}

Mat flux_jacobian(const SystemDef& sys, const Vec& u) {
  if (sys.dG) return sys.dG(u);
  const int d = static_cast<int>(u.size());
  Mat J(d, d);
  for (int q = 0; q < d; ++q) {
    const double h = 1e-6 * (1.0 + std::abs(u(q)));
    Vec up = u, um = u;
    up(q) += h;
    um(q) -= h;
    J.col(q) = (sys.G(up) - sys.G(um)) / (2.0 * h);
  }
  return J;
}

namespace {

BoundaryFn time_derivative(const BoundaryFn& f, const BoundaryFn& df) {
  if (df) return df;
  return [f](double t) {
    const double h = 1e-4;
    return Vec((-f(t + 2 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2 * h)) /
               (12.0 * h));
  };
}

std::function<Vec(double, double)> fd_x(std::function<Vec(double, double)> f,
                                        double h) {
  return [f, h](double x, double t) {
    return Vec((-f(x + 2 * h, t) + 8.0 * f(x + h, t) - 8.0 * f(x - h, t) +
                f(x - 2 * h, t)) /
               (12.0 * h));
  };
}

std::function<Vec(double, double)> fd_t(std::function<Vec(double, double)> f,
                                        double h) {
  return [f, h](double x, double t) {
    return Vec((-f(x, t + 2 * h) + 8.0 * f(x, t + h) - 8.0 * f(x, t - h) +
                f(x, t - 2 * h)) /
               (12.0 * h));
  };
}

/// d/dx M(u(x)) along the direction u_x, by central differences in u.
Mat directional(const MatrixFn& M, const Vec& u, const Vec& ux) {
  const double n = ux.lpNorm<Eigen::Infinity>();
  if (n == 0.0) return Mat::Zero(M(u).rows(), M(u).cols());
  const double h = 1e-5 * (1.0 + u.lpNorm<Eigen::Infinity>()) / n;
  return (M(u + h * ux) - M(u - h * ux)) / (2.0 * h);
}

}  // namespace

HomogenizedSystem homogenize(const SystemDef& sys_in) {
  const SystemDef sys = with_defaults(sys_in);
  HomogenizedSystem hs;
  hs.xL = sys.xL;
  hs.xR = sys.xR;
  const double s = 2.0 / (sys.xR - sys.xL);
  hs.scale = s;

  const BoundaryFn gL = sys.gL, gR = sys.gR;
  const BoundaryFn dL = time_derivative(sys.gL, sys.gL_dt);
  const BoundaryFn dR = time_derivative(sys.gR, sys.gR_dt);
  hs.lift = [gL, gR](double xi, double t) {
    const Vec l = gL(t), r = gR(t);
    return Vec(0.5 * (r - l) * xi + 0.5 * (r + l));
  };
  hs.lift_dt = [dL, dR](double xi, double t) {
    const Vec l = dL(t), r = dR(t);
    return Vec(0.5 * (r - l) * xi + 0.5 * (r + l));
  };

  SystemDef in = sys;
  const double s2 = s * s;
  const MatrixFn A = sys.A, B = sys.B;
  in.A = [A, s2](const Vec& u) { return Mat(s2 * A(u)); };
  in.B = [B, s2](const Vec& u) { return Mat(s2 * B(u)); };
  const VectorFn G = sys.G;
  in.G = [G, s](const Vec& u) { return Vec(s * G(u)); };
  in.dG = [sys, s](const Vec& u) { return Mat(s * flux_jacobian(sys, u)); };
  const SourceFn gamma = sys.gamma;
  const double xL = sys.xL;
  in.gamma = [gamma, xL, s](const Vec& u, double xi, double t) {
    return gamma(u, xL + (xi + 1.0) / s, t);
  };
  const int d = sys.d;
  in.gL = [d](double) { return Vec::Zero(d); };
  in.gR = in.gL;
  in.gL_dt = in.gL;
  in.gR_dt = in.gL;
  const InitialFn u0 = sys.u0;
  const auto lift = hs.lift;
  in.u0 = [u0, lift, xL, s](double xi) {
    return Vec(u0(xL + (xi + 1.0) / s) - lift(xi, 0.0));
  };
  in.xL = -1.0;
  in.xR = 1.0;
  hs.inner = std::move(in);
  return hs;
}

Mat recover(const HomogenizedSystem& hs, const Vec& xi, const Mat& V, double t) {
  const int n = static_cast<int>(xi.size());
  const int d = hs.inner.d;
  if (V.rows() != d || V.cols() != n - 2)
    throw DomainError("recover: state shape mismatch");
  Mat U(d, n);
  for (int j = 0; j < n; ++j) {
    U.col(j) = hs.lift(xi(j), t);
    if (j > 0 && j < n - 1) U.col(j) += V.col(j - 1);
  }
  return U;
}

SystemDef manufacture_source(const SystemDef& sys_in, const ExactSolution& ex) {
  SystemDef sys = with_defaults(sys_in);
  const double h = 1e-3;
  auto u = ex.u;
  auto ut = ex.u_t ? ex.u_t : fd_t(u, h);
  auto ux = ex.u_x ? ex.u_x : fd_x(u, h);
  auto uxx = ex.u_xx ? ex.u_xx : fd_x(ux, h);
  auto uxt = ex.u_xt ? ex.u_xt : fd_t(ux, h);
  auto uxxt = ex.u_xxt ? ex.u_xxt : fd_x(uxt, h);
  const SystemDef base = sys;
  sys.gamma = [base, u, ut, ux, uxx, uxt, uxxt](const Vec&, double x, double t) {
    const Vec U = u(x, t), Ux = ux(x, t), Uxt = uxt(x, t);
    const Mat dA = directional(base.A, U, Ux);
    const Mat dB = directional(base.B, U, Ux);
    const Vec mass = ut(x, t) - dA * Uxt - base.A(U) * uxxt(x, t);
    const Vec diffusion = dB * Ux + base.B(U) * uxx(x, t);
    const Vec transport = flux_jacobian(base, U) * Ux;
    return Vec(mass + diffusion - transport);
  };
  sys.u0 = [u](double x) { return u(x, 0.0); };
  sys.gL = [u, x = sys.xL](double t) { return u(x, t); };
  sys.gR = [u, x = sys.xR](double t) { return u(x, t); };
  sys.gL_dt = [ut, x = sys.xL](double t) { return ut(x, t); };
  sys.gR_dt = [ut, x = sys.xR](double t) { return ut(x, t); };
  return sys;
}

double min_coercivity(const SystemDef& sys, const std::vector<Vec>& samples) {
  double m = std::numeric_limits<double>::infinity();
  for (const Vec& u : samples) {
    const Mat A = sys.A(u);
    const Mat S = 0.5 * (A + A.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues().minCoeff());
  }
  return m;
}

std::vector<std::string> check_hypotheses(const SystemDef& sys_in, double T) {
  const SystemDef sys = with_defaults(sys_in);
  std::vector<std::string> out;
  std::vector<Vec> samples;
  const int n = 65;
  for (int i = 0; i < n; ++i) {
    const double x = sys.xL + (sys.xR - sys.xL) * i / (n - 1);
    samples.push_back(sys.u0(x));
  }
  const double m = min_coercivity(sys, samples);
  if (!(m > 0.0))
    out.push_back(sys.name + ": A(u) is not positive definite on the initial "
                  "data range (min eigenvalue " + std::to_string(m) + ")");

  const int nt = 32;
  const double dt = T / nt;
  double worst = 0.0;
  for (const BoundaryFn* g : {&sys.gL, &sys.gR}) {
    for (int k = 1; k + 1 < nt; ++k) {
      const Vec a = (*g)(k * dt) - (*g)((k - 1) * dt);
      const Vec b = (*g)((k + 1) * dt) - (*g)(k * dt);
      worst = std::max(worst, (b - a).lpNorm<Eigen::Infinity>() /
                                  (1.0 + a.lpNorm<Eigen::Infinity>()));
    }
  }
  if (!std::isfinite(worst) || worst > 0.5)
    out.push_back(sys.name + ": boundary data look non-smooth in time");
  for (const auto& w : out) warn(w);
  return out;
}

}  // namespace pps
