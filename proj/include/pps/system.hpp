#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pps {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using MatrixFn = std::function<Mat(const Vec& u)>;
using VectorFn = std::function<Vec(const Vec& u)>;
using SourceFn = std::function<Vec(const Vec& u, double x, double t)>;
using BoundaryFn = std::function<Vec(double t)>;
using InitialFn = std::function<Vec(double x)>;

/// The continuous problem
///   (I - d/dx(A(u) d/dx)) u_t = -d/dx(B(u) u_x) + d/dx G(u) + gamma(u, x, t)
/// on (xL, xR) with u(xL, t) = gL(t), u(xR, t) = gR(t), u(x, 0) = u0(x).
struct SystemDef {
  std::string name;
  int d = 1;
  MatrixFn A;
  MatrixFn B;
  VectorFn G;
  MatrixFn dG;  // optional; finite differences when empty
  SourceFn gamma;
  BoundaryFn gL;
  BoundaryFn gR;
  BoundaryFn gL_dt;  // optional; finite differences when empty
  BoundaryFn gR_dt;
  InitialFn u0;
  double xL = -1.0;
  double xR = 1.0;
  bool constant_A = false;  // A independent of u
  bool constant_B = false;  // B independent of u
};

/// Fills in missing coefficient functions with zeros and zero boundary data.
SystemDef with_defaults(SystemDef sys);

/// G'(u), either user supplied or by central differences with step
/// 1e-6 * (1 + |u_q|).
Mat flux_jacobian(const SystemDef& sys, const Vec& u);

/// Zero-Dirichlet problem on [-1, 1] for v = u - lift. The coefficient
/// functions of `inner` are the original ones rescaled by s = 2/(xR - xL)
/// (A, B by s^2; G, dG by s) and still take the total state u = v + lift.
/// The assembly adds the lift contributions to the load vector.
struct HomogenizedSystem {
  SystemDef inner;
  std::function<Vec(double xi, double t)> lift;
  std::function<Vec(double xi, double t)> lift_dt;
  double scale = 1.0;
  double xL = -1.0;
  double xR = 1.0;

  double to_physical(double xi) const { return xL + (xi + 1.0) / scale; }
  double to_reference(double x) const { return (x - xL) * scale - 1.0; }
};

HomogenizedSystem homogenize(const SystemDef& sys);

/// Total solution on reference nodes: d x (N+1) with the lift added and the
/// boundary columns set to the Dirichlet data.
Mat recover(const HomogenizedSystem& hs, const Vec& xi, const Mat& V_interior,
            double t);

/// Exact solution with optional analytic derivatives. Missing derivatives are
/// approximated by fourth-order central differences.
struct ExactSolution {
  std::function<Vec(double x, double t)> u;
  std::function<Vec(double x, double t)> u_t;
  std::function<Vec(double x, double t)> u_x;
  std::function<Vec(double x, double t)> u_xx;
  std::function<Vec(double x, double t)> u_xt;
  std::function<Vec(double x, double t)> u_xxt;
};

/// Returns sys with gamma replaced by the strong-form residual of `exact`:
///   gamma = u_t - d/dx(A u_xt) + d/dx(B u_x) - d/dx G(u).
/// Initial and boundary data are taken from `exact` as well.
SystemDef manufacture_source(const SystemDef& sys, const ExactSolution& exact);

/// Smallest eigenvalue of the symmetric part of A over the sampled states.
double min_coercivity(const SystemDef& sys, const std::vector<Vec>& samples);

/// Samples u0 on the domain and returns the warnings (A not uniformly
/// positive definite, boundary data not smooth). Warnings are also logged.
std::vector<std::string> check_hypotheses(const SystemDef& sys, double T);

}  // namespace pps
