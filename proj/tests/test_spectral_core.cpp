#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pps/errors.hpp"
#include "pps/legendre.hpp"
#include "pps/spectral_grid.hpp"

using namespace pps;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace {

// Composite Simpson rule with n (even) panels; independent of the LGL code.
template <typename F>
double simpson(F f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST(Legendre, ConstantPolynomial) { EXPECT_DOUBLE_EQ(legendre_eval(0, 0.37), 1.0); }

TEST(Legendre, NormalizedAtOne) {
  for (int k = 0; k <= 10; ++k) EXPECT_NEAR(legendre_eval(k, 1.0), 1.0, 1e-14);
}

TEST(Legendre, SecondDegreeAtZero) { EXPECT_DOUBLE_EQ(legendre_eval(2, 0.0), -0.5); }

TEST(Legendre, MatchesClosedFormsOfLowDegree) {
  for (double x : {-0.9, -0.3, 0.1, 0.77}) {
    EXPECT_NEAR(legendre_eval(3, x), 0.5 * (5 * x * x * x - 3 * x), 1e-14);
    EXPECT_NEAR(legendre_eval(4, x), (35 * std::pow(x, 4) - 30 * x * x + 3) / 8, 1e-14);
  }
}

TEST(Legendre, DerivativeMatchesFiniteDifferences) {
  const double h = 1e-6;
  for (int k : {1, 5, 12})
    for (double x : {-0.8, 0.2, 0.6}) {
      const double fd = (legendre_eval(k, x + h) - legendre_eval(k, x - h)) / (2 * h);
      EXPECT_NEAR(legendre_eval_with_derivative(k, x).second, fd, 1e-6);
    }
}

TEST(Legendre, RejectsArgumentsOutsideInterval) {
  EXPECT_THROW(legendre_eval(2, 1.1), DomainError);
  EXPECT_THROW(legendre_eval(-1, 0.0), DomainError);
  EXPECT_NO_THROW(legendre_eval(2, 1.0 + 1e-13));
}

TEST(Grid, DegreeTwoClosedForm) {
  const Grid g = build_grid<double>(2);
  EXPECT_NEAR(g.nodes(0), -1.0, 1e-15);
  EXPECT_NEAR(g.nodes(1), 0.0, 1e-15);
  EXPECT_NEAR(g.nodes(2), 1.0, 1e-15);
  EXPECT_NEAR(g.weights(0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(g.weights(1), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(g.weights(2), 1.0 / 3.0, 1e-15);
}

TEST(Grid, RejectsSmallDegree) { EXPECT_THROW(build_grid<double>(1), DomainError); }

TEST(Grid, Invariants) {
  for (int N : {2, 3, 4, 7, 16, 33, 64, 128}) {
    const Grid g = build_grid<double>(N);
    EXPECT_NEAR(g.weights.sum(), 2.0, 1e-12) << N;
    EXPECT_TRUE((g.weights.array() > 0).all());
    for (int j = 0; j < N; ++j) EXPECT_LT(g.nodes(j), g.nodes(j + 1));
    for (int j = 1; j < N; ++j)
      EXPECT_NEAR(legendre_eval_with_derivative(N, g.nodes(j)).second, 0.0, 1e-10) << N;
    EXPECT_LT(g.D1.rowwise().sum().cwiseAbs().maxCoeff(), 1e-10) << N;
    EXPECT_LT((g.D2 - g.D1 * g.D1).cwiseAbs().maxCoeff(), 1e-9 * g.D2.cwiseAbs().maxCoeff());
  }
}

TEST(Grid, DifferentiatesMonomialsExactly) {
  for (int N : {4, 10, 20}) {
    const Grid g = build_grid<double>(N);
    for (int k = 1; k <= N; ++k) {
      const Vec f = g.nodes.array().pow(k).matrix();
      const Vec df = (k * g.nodes.array().pow(k - 1)).matrix();
      EXPECT_LT((g.D1 * f - df).cwiseAbs().maxCoeff(), 1e-9 * std::max(1.0, double(k * k)))
          << "N=" << N << " k=" << k;
    }
  }
}

TEST(Grid, OddIntegrandIntegratesToZero) {
  for (int N : {3, 8, 21}) {
    const Grid g = build_grid<double>(N);
    EXPECT_NEAR(g.weights.dot(g.nodes.array().pow(2 * N - 1).matrix()), 0.0, 1e-10);
  }
}

TEST(Grid, QuadratureExactForRandomPolynomials) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int N : {4, 9, 16}) {
    const Grid g = build_grid<double>(N);
    for (int trial = 0; trial < 20; ++trial) {
      Vec c(2 * N);
      for (int k = 0; k < 2 * N; ++k) c(k) = coef(rng);
      double exact = 0.0;
      for (int k = 0; k < 2 * N; k += 2) exact += 2.0 * c(k) / (k + 1);
      double quad = 0.0;
      for (int j = 0; j <= N; ++j) {
        double p = 0.0;
        for (int k = 2 * N - 1; k >= 0; --k) p = p * g.nodes(j) + c(k);
        quad += g.weights(j) * p;
      }
      EXPECT_NEAR(quad, exact, 1e-9 * (1.0 + std::abs(exact)));
    }
  }
}

TEST(Grid, LongDoubleInstantiation) {
  const auto g = build_grid<long double>(12);
  EXPECT_NEAR(static_cast<double>(g.weights.sum()), 2.0, 1e-15);
}

TEST(NodalBasis, KroneckerProperty) {
  const Grid g = build_grid<double>(9);
  for (int j = 0; j <= 9; ++j)
    for (int k = 0; k <= 9; ++k)
      EXPECT_NEAR(nodal_basis(g, j, g.nodes(k)), j == k ? 1.0 : 0.0, 1e-13);
}

TEST(NodalBasis, DerivativesSumToZero) {
  const Grid g = build_grid<double>(11);
  for (int k = 0; k <= 11; ++k) {
    double s = 0.0;
    for (int j = 0; j <= 11; ++j) s += nodal_basis_deriv(g, j, g.nodes(k));
    EXPECT_NEAR(s, 0.0, 1e-10);
  }
}

TEST(NodalBasis, DerivativeAtNodesMatchesD1) {
  const Grid g = build_grid<double>(8);
  const double h = 1e-6;
  for (int j = 0; j <= 8; ++j)
    for (int k = 1; k < 8; ++k) {
      // independent central difference of the Lagrange polynomial
      const double x = g.nodes(k);
      const double fd = (nodal_basis(g, j, x + h) - nodal_basis(g, j, x - h)) / (2 * h);
      EXPECT_NEAR(g.D1(k, j), fd, 1e-6);
      EXPECT_NEAR(nodal_basis_deriv(g, j, x), g.D1(k, j), 1e-9);
    }
}

TEST(NodalBasis, DerivativeOffNodes) {
  const Grid g = build_grid<double>(6);
  const double h = 1e-6;
  for (int j = 0; j <= 6; ++j)
    for (double x : {-0.91, 0.13, 0.55}) {
      const double fd = (nodal_basis(g, j, x + h) - nodal_basis(g, j, x - h)) / (2 * h);
      EXPECT_NEAR(nodal_basis_deriv(g, j, x), fd, 1e-7);
    }
}

TEST(NodalBasis, RejectsBadIndex) {
  const Grid g = build_grid<double>(4);
  EXPECT_THROW(nodal_basis(g, 5, 0.0), DomainError);
}

TEST(Projection, Constant) {
  const Grid g = build_grid<double>(8);
  const ModalCoeffs<double> c = project_l2(g, Vec(Vec::Ones(9)));
  EXPECT_NEAR(c(0), 1.0, 1e-14);
  EXPECT_LT(c.tail(8).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Projection, Linear) {
  const Grid g = build_grid<double>(8);
  const ModalCoeffs<double> c = project_l2(g, g.nodes);
  EXPECT_NEAR(c(1), 1.0, 1e-14);
  EXPECT_NEAR(c(0), 0.0, 1e-14);
  EXPECT_LT(c.tail(7).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Projection, ReproducesPolynomialsBelowDegreeN) {
  const Grid g = build_grid<double>(10);
  const Vec u = (g.nodes.array().pow(9) - 2.0 * g.nodes.array().pow(4) + 0.5).matrix();
  const ModalCoeffs<double> c = project_l2(g, u);
  for (int j = 0; j <= 10; ++j) EXPECT_NEAR(reconstruct(c, g.nodes(j)), u(j), 1e-9);
}

TEST(Projection, SineRoundTripAgainstDenseQuadrature) {
  const int N = 16;
  const Grid g = build_grid<double>(N);
  const Vec u = (std::numbers::pi * g.nodes.array()).sin().matrix();
  const ModalCoeffs<double> c = project_l2(g, u);
  for (int k = 0; k < N; ++k) {
    const double oracle =
        (2 * k + 1) / 2.0 *
        simpson([k](double x) { return std::sin(std::numbers::pi * x) * legendre_eval(k, x); },
                -1.0, 1.0);
    EXPECT_NEAR(c(k), oracle, 1e-8) << k;
  }
  double err = 0.0;
  for (int j = 0; j <= N; ++j) err = std::max(err, std::abs(reconstruct(c, g.nodes(j)) - u(j)));
  EXPECT_LT(err, 1e-8);
}

TEST(Projection, ErrorDecaysFasterThanAnyPower) {
  auto proj_error = [](int N) {
    const Grid g = build_grid<double>(N);
    const Vec u = (std::numbers::pi * g.nodes.array()).sin().matrix();
    const ModalCoeffs<double> c = project_l2(g, u);
    return std::sqrt(simpson(
        [&](double x) {
          const double e = std::sin(std::numbers::pi * x) - reconstruct(c, x);
          return e * e;
        },
        -1.0, 1.0, 4000));
  };
  const double e8 = proj_error(8), e16 = proj_error(16);
  EXPECT_LT(e16 / e8, 0.1);
  EXPECT_LT(e16, 1e-9);
}

TEST(PhysicalNodes, AffineMap) {
  const Grid g = build_grid<double>(4);
  const Vec x = physical_nodes(g, -3.0, 5.0);
  EXPECT_DOUBLE_EQ(x(0), -3.0);
  EXPECT_DOUBLE_EQ(x(4), 5.0);
  EXPECT_NEAR(x(2), 1.0, 1e-14);
}
