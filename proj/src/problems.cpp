#include "pps/problems.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "pps/errors.hpp"

namespace pps {

namespace {

constexpr double kPi = std::numbers::pi;

double square_pulse(double x) { return std::abs(x) <= 0.5 ? 1.0 : 0.0; }
double hat(double x) { return 1.0 - std::abs(x); }

Mat A_linear(const Vec&) {
  Mat A(2, 2);
  A << 2.0, 1.0, 0.0, 2.0;
  return A;
}

Mat B_identity(const Vec&) { return Mat::Identity(2, 2); }

Vec G_quadratic(const Vec& u) { return Vec{{u(0) * u(1), u(0) * u(0)}}; }

Mat dG_quadratic(const Vec& u) {
  Mat J(2, 2);
  J << u(1), u(0), 2.0 * u(0), 0.0;
  return J;
}

}  // namespace

SeriesSolution make_series(const Vec& U1, const Vec& U2) {
  SeriesSolution s;
  s.M = static_cast<int>(U1.size());
  s.U1 = U1;
  s.U2 = U2;
  s.alpha.resize(s.M);
  s.beta.resize(s.M);
  s.lam.resize(s.M);
  for (int i = 0; i < s.M; ++i) {
    const double k = (i + 1) * kPi / 2.0;
    s.lam(i) = -k * k;
    s.alpha(i) = -s.lam(i) / (1.0 - 2.0 * s.lam(i));
    s.beta(i) = -s.alpha(i) * s.alpha(i);
  }
  return s;
}

std::pair<Vec, Vec> pulse_coefficients(PulseKind kind, int M) {
  if (M < 1) throw DomainError("pulse_coefficients: M must be >= 1");
  Vec U1(M), U2(M);
  for (int i = 0; i < M; ++i) {
    const double k = (i + 1) * kPi / 2.0;
    if (kind == PulseKind::Square) {
      // int_{-1/2}^{1/2} sin(k (x+1)) dx
      U1(i) = (std::cos(k / 2.0) - std::cos(1.5 * k)) / k;
      U2(i) = U1(i);
    } else {
      // int_{-1}^{1} (1 - |x|) sin(k (x+1)) dx
      U1(i) = (2.0 * std::sin(k) - std::sin(2.0 * k)) / (k * k);
      U2(i) = 0.0;
    }
  }
  return {U1, U2};
}

SeriesSolution pulse_series(PulseKind kind, int M) {
  auto [U1, U2] = pulse_coefficients(kind, M);
  SeriesSolution s = make_series(U1, U2);
  if (kind == PulseKind::Square)
    s.initial = [](double x) {
      const double v = square_pulse(x);
      return Vec{{v, v}};
    };
  else
    s.initial = [](double x) { return Vec{{hat(x), 0.0}}; };
  return s;
}

double series_tail_bound(const SeriesSolution& s, double t) {
  // Envelope |U_n| <= C / n^p, p in {1, 2}, judged on the upper modes.
  auto envelope = [&](int from, int to, int p) {
    double C = 0.0;
    for (int i = from; i < to; ++i) {
      const double a = std::max(std::abs(s.U1(i)), std::abs(s.U2(i)));
      C = std::max(C, a * std::pow(i + 1.0, p));
    }
    return C;
  };
  const int M = s.M;
  if (M < 8) return std::numeric_limits<double>::infinity();
  const double upper = envelope(M / 2, M, 1);
  const double lower = envelope(M / 4, M / 2, 1);
  if (upper == 0.0) return 0.0;
  const double grow = std::exp(0.5 * t) * (1.0 + 0.25 * t);
  // A 1/n envelope has a divergent tail sum.
  if (upper > 0.7 * lower) return std::numeric_limits<double>::infinity();
  return grow * envelope(M / 2, M, 2) / M;
}

SeriesValue series_eval(const SeriesSolution& s, double x, double t,
                        bool accelerated) {
  SeriesValue out;
  if (std::abs(x) > 1.0 + 1e-12)
    throw DomainError("series_eval: |x| > 1");
  const bool acc = accelerated && static_cast<bool>(s.initial);
  const double eh = std::exp(0.5 * t);
  double r1max = 0.0;
  for (int i = 0; i < s.M; ++i) {
    const double n = i + 1.0;
    const double X = std::sin(n * kPi / 2.0 * (x + 1.0));
    const double e = std::exp(t * s.alpha(i));
    double c1 = e * (s.U1(i) + t * s.beta(i) * s.U2(i));
    double c2 = e * s.U2(i);
    if (acc) {
      c1 -= eh * (s.U1(i) - 0.25 * t * s.U2(i));
      c2 -= eh * s.U2(i);
      if (i >= s.M / 2)
        r1max = std::max(r1max, std::max(std::abs(c1), std::abs(c2)) * n * n * n);
    }
    out.u1 += c1 * X;
    out.u2 += c2 * X;
  }
  if (acc) {
    const Vec U0 = s.initial(x);
    out.u1 += eh * (U0(0) - 0.25 * t * U0(1));
    out.u2 += eh * U0(1);
    // sum_{n>M} C/n^3 <= C/(2 M^2)
    out.tail_bound = r1max / (2.0 * s.M * s.M);
  } else {
    out.tail_bound = series_tail_bound(s, t);
  }
  return out;
}

std::atomic<long>& fractional_flux_guard_hits() {
  static std::atomic<long> hits{0};
  return hits;
}

namespace {

double frac_lambda(double u, double v, double a) {
  const double w = 1.0 - u - v;
  return a * v + (1.0 - a) * v * v + u * u + w * w;
}

bool guard(double lam) {
  if (std::abs(lam) > 1e-14) return false;
  if (fractional_flux_guard_hits().fetch_add(1) == 0)
    warn("fractional flux: lambda(u, v) = 0, flux set to 0");
  return true;
}

}  // namespace

Vec fractional_flux(const Vec& U, double a) {
  const double u = U(0), v = U(1);
  const double lam = frac_lambda(u, v, a);
  if (guard(lam)) return Vec::Zero(2);
  return Vec{{u * u / lam, v * v / lam}};
}

Mat fractional_flux_jacobian(const Vec& U, double a) {
  const double u = U(0), v = U(1);
  const double lam = frac_lambda(u, v, a);
  if (guard(lam)) return Mat::Zero(2, 2);
  const double w = 1.0 - u - v;
  const double lu = 2.0 * u - 2.0 * w;
  const double lv = a + 2.0 * (1.0 - a) * v - 2.0 * w;
  const double l2 = lam * lam;
  Mat J(2, 2);
  J << 2.0 * u / lam - u * u * lu / l2, -u * u * lv / l2,
      -v * v * lu / l2, 2.0 * v / lam - v * v * lv / l2;
  return J;
}

SystemDef riemann_setup(RiemannFlux flux) {
  SystemDef s;
  s.d = 2;
  s.xL = -56.0;
  s.xR = 200.0;
  s.A = [](const Vec& u) {
    Mat A = Mat::Zero(2, 2);
    A(0, 0) = 1.0 / (1.0 + u(0) * u(0));
    A(1, 1) = 1.0 / (1.0 + u(1) * u(1));
    return A;
  };
  s.B = [](const Vec&) { return Mat::Zero(2, 2); };
  s.constant_B = true;
  if (flux == RiemannFlux::Quadratic) {
    s.name = "riemann-quad";
    s.G = G_quadratic;
    s.dG = dG_quadratic;
  } else {
    s.name = "riemann-fractional";
    s.G = [](const Vec& u) { return fractional_flux(u); };
    s.dG = [](const Vec& u) { return fractional_flux_jacobian(u); };
  }
  s.u0 = [](double x) { return x <= 0.0 ? Vec{{0.1, 0.9}} : Vec::Zero(2); };
  return with_defaults(s);
}

ExactSolution smooth_exact_solution() {
  ExactSolution e;
  e.u = [](double x, double t) {
    return Vec{{x + std::exp(-t) * std::sin(x), (1.0 + t) * std::sin(x)}};
  };
  e.u_t = [](double x, double t) {
    return Vec{{-std::exp(-t) * std::sin(x), std::sin(x)}};
  };
  e.u_x = [](double x, double t) {
    return Vec{{1.0 + std::exp(-t) * std::cos(x), (1.0 + t) * std::cos(x)}};
  };
  e.u_xx = [](double x, double t) {
    return Vec{{-std::exp(-t) * std::sin(x), -(1.0 + t) * std::sin(x)}};
  };
  e.u_xt = [](double x, double t) {
    return Vec{{-std::exp(-t) * std::cos(x), std::cos(x)}};
  };
  e.u_xxt = [](double x, double t) {
    return Vec{{std::exp(-t) * std::sin(x), -std::sin(x)}};
  };
  return e;
}

std::vector<std::string> problem_ids() {
  return {"p1a", "p1b", "p2-square", "p2-hat", "riemann-quad",
          "riemann-fractional"};
}

namespace {

ExactFn from_exact(const ExactSolution& e) {
  return [u = e.u](const Vec& x, double t) {
    Mat out(2, x.size());
    for (int j = 0; j < x.size(); ++j) out.col(j) = u(x(j), t);
    return out;
  };
}

ExactFn from_series(SeriesSolution s) {
  return [s = std::move(s)](const Vec& x, double t) {
    Mat out(2, x.size());
    for (int j = 0; j < x.size(); ++j) {
      const SeriesValue v = series_eval(s, x(j), t, true);
      out(0, j) = v.u1;
      out(1, j) = v.u2;
    }
    return out;
  };
}

}  // namespace

Problem make_problem(const std::string& id) {
  Problem p;
  p.id = id;
  if (id == "p1a" || id == "p1b") {
    SystemDef s;
    s.name = id;
    s.d = 2;
    s.xL = -kPi;
    s.xR = kPi;
    if (id == "p1a") {
      s.A = A_linear;
      s.B = B_identity;
      s.constant_A = s.constant_B = true;
    } else {
      s.A = [](const Vec& u) {
        Mat A = Mat::Zero(2, 2);
        A(0, 0) = 4.0 + u(0);
        A(1, 1) = 4.0 + u(1);
        return A;
      };
      s.B = [](const Vec& u) {
        Mat B(2, 2);
        B << u(0), u(1), u(1), 0.0;
        return B;
      };
    }
    s.G = G_quadratic;
    s.dG = dG_quadratic;
    const ExactSolution e = smooth_exact_solution();
    p.system = manufacture_source(s, e);
    p.exact = from_exact(e);
    p.T = 1.0;
    return p;
  }
  if (id == "p2-square" || id == "p2-hat") {
    const PulseKind kind = id == "p2-square" ? PulseKind::Square : PulseKind::Hat;
    SeriesSolution series = pulse_series(kind, 2000);
    SystemDef s;
    s.name = id;
    s.d = 2;
    s.xL = -1.0;
    s.xR = 1.0;
    s.A = A_linear;
    s.B = B_identity;
    s.constant_A = s.constant_B = true;
    s.u0 = series.initial;
    p.system = with_defaults(s);
    p.exact = from_series(std::move(series));
    p.T = 1.0;
    return p;
  }
  if (id == "riemann-quad" || id == "riemann-fractional") {
    p.system = riemann_setup(id == "riemann-quad" ? RiemannFlux::Quadratic
                                                  : RiemannFlux::Fractional);
    p.T = 50.0;
    p.default_scheme = "ssp23";
    return p;
  }
  throw ConfigError("unknown problem '" + id + "'");
}

}  // namespace pps
