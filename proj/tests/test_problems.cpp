#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pps/errors.hpp"
#include "pps/problems.hpp"
#include "pps/spectral_grid.hpp"

using namespace pps;

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Gauss-Lobatto rule on [a, b] with `panels` panels of degree 24.
template <typename F>
double panel_quadrature(F f, double a, double b, int panels = 8) {
  static const Grid g = build_grid<double>(24);
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int j = 0; j <= g.N; ++j) s += 0.5 * h * g.weights(j) * f(lo + 0.5 * h * (g.nodes(j) + 1.0));
  }
  return s;
}

double X(int n, double x) { return std::sin(n * kPi / 2.0 * (x + 1.0)); }

}  // namespace

TEST(Series, ModeRelations) {
  const SeriesSolution s = pulse_series(PulseKind::Hat, 200);
  for (int i = 0; i < s.M; ++i) {
    const double lam = -std::pow((i + 1) * kPi / 2.0, 2);
    EXPECT_NEAR(s.lam(i), lam, 1e-14 * std::abs(lam));
    EXPECT_NEAR(s.alpha(i), -lam / (1.0 - 2.0 * lam), 1e-14);
    EXPECT_NEAR(s.beta(i), -s.alpha(i) * s.alpha(i), 1e-14);
    EXPECT_LT(s.alpha(i), 0.5);
    if (i > 0) {
      EXPECT_GT(s.alpha(i), s.alpha(i - 1));
    }
  }
}

// Each mode solves (I - A d2/dx2) u_t = -u_xx with A = [[2,1],[0,2]].
TEST(Series, ModesSolveTheLinearSystem) {
  const SeriesSolution s = make_series(Vec::Constant(20, 0.7), Vec::Constant(20, -0.3));
  const Mat A{{2.0, 1.0}, {0.0, 2.0}};
  for (int i = 0; i < 20; ++i)
    for (double t : {0.0, 0.3, 1.0}) {
      const double a = s.alpha(i), b = s.beta(i), lam = s.lam(i);
      const double e = std::exp(a * t);
      const Vec c{{e * (0.7 + t * b * -0.3), e * -0.3}};
      const Vec dc{{a * c(0) + e * b * -0.3, a * c(1)}};
      const Vec r = (Mat::Identity(2, 2) - lam * A) * dc + lam * c;
      EXPECT_LT(r.norm(), 1e-10 * (1.0 + std::abs(lam))) << i;
    }
}

TEST(Series, SquarePulseAtCentre) {
  const SeriesSolution s = pulse_series(PulseKind::Square, 2000);
  const SeriesValue v = series_eval(s, 0.0, 0.0);
  EXPECT_LT(std::abs(v.u1 - 1.0), 1e-3);
  EXPECT_LT(std::abs(v.u2 - 1.0), 1e-3);
}

TEST(Series, DecoupledFirstComponent) {
  const SeriesSolution s = pulse_series(PulseKind::Hat, 500);
  for (double x : {-0.6, 0.1, 0.8}) {
    const SeriesValue v = series_eval(s, x, 0.5);
    EXPECT_EQ(v.u2, 0.0);
    double u1 = 0.0;
    for (int i = 0; i < s.M; ++i) u1 += std::exp(0.5 * s.alpha(i)) * s.U1(i) * X(i + 1, x);
    EXPECT_NEAR(v.u1, u1, 1e-13);
  }
}

TEST(Series, VanishesAtEndpoints) {
  const SeriesSolution s = pulse_series(PulseKind::Square, 300);
  for (double t : {0.0, 1.0})
    for (double x : {-1.0, 1.0}) {
      for (bool acc : {false, true}) {
        const SeriesValue v = series_eval(s, x, t, acc);
        EXPECT_NEAR(v.u1, 0.0, 1e-10);
        EXPECT_NEAR(v.u2, 0.0, 1e-10);
      }
    }
}

TEST(Series, AcceleratedSumAgreesWithPlainSum) {
  const SeriesSolution s = pulse_series(PulseKind::Hat, 4000);
  for (double x : {-0.7, 0.2, 0.55}) {
    const SeriesValue plain = series_eval(s, x, 1.0, false);
    const SeriesValue acc = series_eval(s, x, 1.0, true);
    EXPECT_NEAR(plain.u1, acc.u1, 1e-6);
    EXPECT_LT(acc.tail_bound, 1e-8);
  }
  EXPECT_THROW(series_eval(s, 1.5, 0.0), DomainError);
}

TEST(Series, TailBound) {
  EXPECT_TRUE(std::isinf(series_tail_bound(pulse_series(PulseKind::Square, 2000), 1.0)));
  const double hat = series_tail_bound(pulse_series(PulseKind::Hat, 2000), 1.0);
  EXPECT_GT(hat, 0.0);
  EXPECT_LT(hat, 1e-3);
}

TEST(Pulse, BasisIsOrthonormal) {
  for (int n : {1, 2, 7})
    for (int m : {1, 2, 7})
      EXPECT_NEAR(panel_quadrature([&](double x) { return X(n, x) * X(m, x); }, -1.0, 1.0),
                  n == m ? 1.0 : 0.0, 1e-12);
}

TEST(Pulse, ClosedFormsAgainstQuadrature) {
  const auto [s1, s2] = pulse_coefficients(PulseKind::Square, 30);
  const auto [h1, h2] = pulse_coefficients(PulseKind::Hat, 30);
  for (int n = 1; n <= 30; ++n) {
    const double sq = panel_quadrature([&](double x) { return X(n, x); }, -0.5, 0.5);
    const double hat = panel_quadrature([&](double x) { return (1 + x) * X(n, x); }, -1.0, 0.0) +
                       panel_quadrature([&](double x) { return (1 - x) * X(n, x); }, 0.0, 1.0);
    EXPECT_NEAR(s1(n - 1), sq, 1e-12);
    EXPECT_EQ(s2(n - 1), s1(n - 1));
    EXPECT_NEAR(h1(n - 1), hat, 1e-12);
    EXPECT_EQ(h2(n - 1), 0.0);
  }
  EXPECT_NEAR(s1(1), 0.0, 1e-15);
}

TEST(Pulse, CoefficientDecay) {
  const auto [s1, s2] = pulse_coefficients(PulseKind::Square, 100);
  const auto [h1, h2] = pulse_coefficients(PulseKind::Hat, 100);
  double Cs = 0.0, Ch = 0.0;
  for (int n = 1; n <= 100; ++n) {
    Cs = std::max(Cs, std::abs(s1(n - 1)) * n);
    Ch = std::max(Ch, std::abs(h1(n - 1)) * n * n);
  }
  EXPECT_LT(Cs, 1.0);
  EXPECT_LT(Ch, 2.0);
  EXPECT_THROW(pulse_coefficients(PulseKind::Hat, 0), DomainError);
}

TEST(Pulse, Parseval) {
  const auto [s1, s2] = pulse_coefficients(PulseKind::Square, 2000);
  EXPECT_NEAR(s1.squaredNorm(), 1.0, 1e-4 * 3);
  const auto [h1, h2] = pulse_coefficients(PulseKind::Hat, 2000);
  EXPECT_NEAR(h1.squaredNorm(), 2.0 / 3.0, 1e-8);
}

TEST(FractionalFlux, WorkedExample) {
  const Vec G = fractional_flux(Vec{{0.1, 0.9}});
  EXPECT_NEAR(G(0), 0.01 / 0.829, 1e-14);
  EXPECT_NEAR(G(1), 0.81 / 0.829, 1e-14);
}

TEST(FractionalFlux, Origin) {
  const Vec G = fractional_flux(Vec::Zero(2));
  EXPECT_EQ(G.norm(), 0.0);
}

TEST(FractionalFlux, JacobianMatchesFiniteDifferences) {
  const double h = 1e-6;
  for (const Vec& u : {Vec{{0.1, 0.9}}, Vec{{0.4, 0.2}}, Vec{{-0.3, 0.5}}}) {
    const Mat J = fractional_flux_jacobian(u);
    for (int q = 0; q < 2; ++q) {
      Vec e = Vec::Zero(2);
      e(q) = h;
      const Vec fd = (fractional_flux(u + e) - fractional_flux(u - e)) / (2 * h);
      EXPECT_LT((J.col(q) - fd).norm(), 1e-8);
    }
  }
}

TEST(FractionalFlux, GuardOnVanishingDenominator) {
  // With a = 3 and u = 0, lambda = 1 + v - v^2 vanishes at v = (1 - sqrt 5)/2.
  const long before = fractional_flux_guard_hits().load();
  const Vec u{{0.0, (1.0 - std::sqrt(5.0)) / 2.0}};
  EXPECT_EQ(fractional_flux(u, 3.0).norm(), 0.0);
  EXPECT_EQ(fractional_flux_jacobian(u, 3.0).norm(), 0.0);
  EXPECT_EQ(fractional_flux_guard_hits().load(), before + 2);
}

TEST(Riemann, Setup) {
  for (RiemannFlux f : {RiemannFlux::Quadratic, RiemannFlux::Fractional}) {
    const SystemDef s = riemann_setup(f);
    EXPECT_EQ(s.xL, -56.0);
    EXPECT_EQ(s.xR, 200.0);
    EXPECT_LT((s.A(Vec::Zero(2)) - Mat::Identity(2, 2)).norm(), 1e-15);
    EXPECT_NEAR(s.A(Vec{{1.0, 2.0}})(1, 1), 0.2, 1e-15);
    EXPECT_EQ(s.A(Vec{{1.0, 2.0}})(0, 1), 0.0);
    EXPECT_EQ(s.B(Vec{{1.0, 2.0}}).norm(), 0.0);
    EXPECT_EQ(s.u0(-3.0), (Vec{{0.1, 0.9}}));
    EXPECT_EQ(s.u0(0.5).norm(), 0.0);
    EXPECT_EQ(s.gL(1.0).norm(), 0.0);
  }
}

TEST(Registry, KnownAndUnknownIds) {
  for (const auto& id : problem_ids()) EXPECT_EQ(make_problem(id).id, id);
  EXPECT_THROW(make_problem("p9"), ConfigError);
  EXPECT_EQ(make_problem("riemann-quad").default_scheme, "ssp23");
  EXPECT_FALSE(static_cast<bool>(make_problem("riemann-quad").exact));
}

TEST(Registry, SmoothProblemExactSolutionAtBoundary) {
  const Problem p = make_problem("p1a");
  const Mat ex = p.exact(Vec{{-kPi, kPi}}, 0.7);
  EXPECT_NEAR(ex(0, 0), -kPi, 1e-12);
  EXPECT_NEAR(ex(0, 1), kPi, 1e-12);
  EXPECT_NEAR(ex(1, 0), 0.0, 1e-12);
  EXPECT_NEAR(p.system.gR(0.7)(0), kPi, 1e-12);
}

TEST(Registry, SeriesProblemMatchesInitialData) {
  const Problem p = make_problem("p2-hat");
  const Vec x{{-0.5, 0.0, 0.25}};
  const Mat ex = p.exact(x, 0.0);
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(ex(0, j), 1.0 - std::abs(x(j)), 1e-9);
    EXPECT_NEAR(ex(1, j), 0.0, 1e-12);
    EXPECT_NEAR(p.system.u0(x(j))(0), 1.0 - std::abs(x(j)), 1e-15);
  }
}
