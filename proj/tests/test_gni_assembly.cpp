#include <gtest/gtest.h>

#include <cmath>

#include "pps/gni_assembly.hpp"
#include "pps/problems.hpp"

using namespace pps;

namespace {

MatrixFn constant(double c) {
  return [c](const Vec& u) { return Mat::Constant(u.size(), u.size(), c); };
}

// Dense Gauss-Lobatto rule of higher degree used as an integration oracle.
double dense_integral(const std::function<double(double)>& f, int M = 96) {
  static const Grid fine = build_grid<double>(M);
  double s = 0.0;
  for (int h = 0; h <= M; ++h) s += fine.weights(h) * f(fine.nodes(h));
  return s;
}

Mat interior_D1(const Grid& g) { return g.D1.block(1, 1, g.N - 1, g.N - 1); }

}  // namespace

TEST(Flatten, RoundTrip) {
  Mat U(2, 3);
  U << 1, 2, 3, 4, 5, 6;
  const Vec v = flatten(U);
  EXPECT_EQ(v(3), 4.0);
  EXPECT_EQ(unflatten(v, 2), U);
  const Mat full = with_zero_boundary(U);
  EXPECT_EQ(full.cols(), 5);
  EXPECT_EQ(full(1, 0), 0.0);
  EXPECT_EQ(full(1, 4), 0.0);
  EXPECT_EQ(full(1, 2), 5.0);
}

TEST(K0, DiagonalWeights) {
  const Grid g = build_grid<double>(6);
  const Mat K0 = assemble_K0(g, 2);
  ASSERT_EQ(K0.rows(), 10);
  for (int p = 0; p < 2; ++p)
    for (int k = 0; k < 5; ++k) EXPECT_EQ(K0(p * 5 + k, p * 5 + k), g.weights(k + 1));
  EXPECT_EQ((K0 - Mat(K0.diagonal().asDiagonal())).norm(), 0.0);
}

TEST(K2, UnitCoefficientIsStiffnessMatrix) {
  for (int N : {4, 8, 16, 32}) {
    const Grid g = build_grid<double>(N);
    const Mat S = assemble_K2(g, constant(1.0), Mat::Zero(1, N + 1));
    EXPECT_LT((S - S.transpose()).cwiseAbs().maxCoeff(), 1e-11);
    Eigen::SelfAdjointEigenSolver<Mat> es(S);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0) << N;
  }
}

TEST(K2, StiffnessAgainstDenseQuadrature) {
  const int N = 10;
  const Grid g = build_grid<double>(N);
  const Mat S = assemble_K2(g, constant(1.0), Mat::Zero(1, N + 1));
  Vec v(N - 1);
  for (int k = 1; k < N; ++k) v(k - 1) = 1.0 - g.nodes(k) * g.nodes(k);
  const Vec Sv = S * v;
  for (int j = 1; j < N; ++j) {
    const double oracle =
        dense_integral([&](double x) { return nodal_basis_deriv(g, j, x) * (-2.0 * x); });
    EXPECT_NEAR(Sv(j - 1), oracle, 1e-9);
  }
}

TEST(K2, ZeroCoefficient) {
  const Grid g = build_grid<double>(7);
  EXPECT_EQ(assemble_K2(g, constant(0.0), Mat::Zero(1, 8)).norm(), 0.0);
}

TEST(K2, BlockStructureOfConstantSystem) {
  const int N = 8;
  const Grid g = build_grid<double>(N);
  const Mat S = assemble_K2(g, constant(1.0), Mat::Zero(1, N + 1));
  const MatrixFn A = [](const Vec&) { return Mat{{2.0, 1.0}, {0.0, 2.0}}; };
  const Mat K = assemble_K2(g, A, Mat::Zero(2, N + 1));
  const int n = N - 1;
  EXPECT_LT((K.block(0, 0, n, n) - 2 * S).norm(), 1e-12);
  EXPECT_LT((K.block(0, n, n, n) - S).norm(), 1e-12);
  EXPECT_EQ(K.block(n, 0, n, n).norm(), 0.0);
  EXPECT_LT((K.block(n, n, n, n) - 2 * S).norm(), 1e-12);
}

TEST(K1, ZeroFlux) {
  const Grid g = build_grid<double>(6);
  EXPECT_EQ(assemble_K1(g, constant(0.0), Mat::Zero(1, 7)).norm(), 0.0);
}

TEST(K1, IdentityFluxIsWeightedD1) {
  const int N = 9;
  const Grid g = build_grid<double>(N);
  const Mat K1 = assemble_K1(g, constant(1.0), Mat::Zero(1, N + 1));
  const Mat oracle = g.weights.segment(1, N - 1).asDiagonal() * interior_D1(g);
  EXPECT_LT((K1 - oracle).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(K1, QuadraticFluxVanishesAtZeroState) {
  const Grid g = build_grid<double>(6);
  const MatrixFn dG = [](const Vec& u) { return Mat{{u(1), u(0)}, {2 * u(0), 0.0}}; };
  EXPECT_EQ(assemble_K1(g, dG, State{0.0, Mat::Zero(2, 5)}).norm(), 0.0);
}

TEST(H, ZeroSource) {
  const Grid g = build_grid<double>(5);
  const SourceFn zero = [](const Vec& u, double, double) { return Vec::Zero(u.size()); };
  EXPECT_EQ(assemble_H(g, zero, State{0.0, Mat::Zero(1, 4)}).norm(), 0.0);
}

TEST(H, UnitSourceGivesWeights) {
  const Grid g = build_grid<double>(5);
  const SourceFn one = [](const Vec& u, double, double) { return Vec::Ones(u.size()); };
  const Vec H = assemble_H(g, one, State{0.0, Mat::Zero(1, 4)});
  EXPECT_LT((H - g.weights.segment(1, 4)).norm(), 1e-15);
}

TEST(H, IdentitySourceIsMassTimesState) {
  const Grid g = build_grid<double>(6);
  const SourceFn id = [](const Vec& u, double, double) { return u; };
  Mat U(2, 5);
  U << 1, -2, 3, 0.5, 0.1, 4, 0, -1, 2, 7;
  const Vec H = assemble_H(g, id, State{0.0, U});
  EXPECT_LT((H - assemble_K0(g, 2) * flatten(U)).norm(), 1e-14);
}

TEST(Rhs, TrivialSystem) {
  SystemDef s;
  s.d = 1;
  const HomogenizedSystem hs = homogenize(with_defaults(s));
  const Grid g = build_grid<double>(8);
  const State st{0.0, Mat::Random(1, 7)};
  const auto [K, F] = semidiscrete_rhs(assemble(g, hs, st), st);
  EXPECT_LT((K - assemble_K0(g, 1)).norm(), 1e-15);
  EXPECT_EQ(F.norm(), 0.0);
}

// After multiplying by K0^{-1} the scalar constant-coefficient system reads
// (I - delta D2) U' = -eps D2 U + c D1 U on interior nodes.
TEST(Rhs, ScalarConstantCoefficientStructure) {
  const int N = 12;
  const double delta = 0.3, eps = 0.05, c = 0.7;
  SystemDef s;
  s.d = 1;
  s.A = constant(delta);
  s.B = constant(eps);
  s.G = [c](const Vec& u) { return Vec(c * u); };
  s.dG = constant(c);
  const HomogenizedSystem hs = homogenize(with_defaults(s));
  const Grid g = build_grid<double>(N);
  const State st{0.0, Mat::Random(1, N - 1)};
  const auto [K, F] = semidiscrete_rhs(assemble(g, hs, st), st);
  const Mat W = g.weights.segment(1, N - 1).asDiagonal().inverse();
  const Mat D2 = g.D2.block(1, 1, N - 1, N - 1);
  const Mat I = Mat::Identity(N - 1, N - 1);
  EXPECT_LT((W * K - (I - delta * D2)).cwiseAbs().maxCoeff(), 1e-9);
  const Vec U = st.U.row(0).transpose();
  EXPECT_LT((W * F - (-eps * D2 * U + c * interior_D1(g) * U)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Rhs, ScalarMassMatrixIsSymmetricPositiveDefinite) {
  SystemDef s;
  s.d = 1;
  s.A = constant(0.5);
  const HomogenizedSystem hs = homogenize(with_defaults(s));
  const Grid g = build_grid<double>(16);
  const State st{0.0, Mat::Zero(1, 15)};
  const Mat K = semidiscrete_rhs(assemble(g, hs, st), st).first;
  EXPECT_LT((K - K.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Mat> es(K);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

// With u = x on [-1, 1] through the lift and c(u) = u, entries of K2 are
// integrals of x psi_j' psi_k' (degree 2N-1), exact under LGL quadrature.
TEST(Assemble, LiftedCoefficientMatchesDenseQuadrature) {
  const int N = 8;
  SystemDef s;
  s.d = 1;
  s.A = [](const Vec& u) { return Mat::Constant(1, 1, u(0)); };
  s.gL = [](double) { return Vec::Constant(1, -1.0); };
  s.gR = [](double) { return Vec::Constant(1, 1.0); };
  const HomogenizedSystem hs = homogenize(with_defaults(s));
  const Grid g = build_grid<double>(N);
  const AssembledOperators ops = assemble(g, hs, State{0.0, Mat::Zero(1, N - 1)});
  for (int j = 1; j < N; ++j)
    for (int k = 1; k < N; ++k) {
      const double oracle = dense_integral([&](double x) {
        return x * nodal_basis_deriv(g, j, x) * nodal_basis_deriv(g, k, x);
      });
      EXPECT_NEAR(ops.K2A(j - 1, k - 1), oracle, 1e-9);
    }
}

TEST(Assemble, CacheGivesIdenticalOperators) {
  const Problem p = make_problem("p1a");
  const HomogenizedSystem hs = homogenize(p.system);
  const Grid g = build_grid<double>(10);
  const State st{0.3, initial_state(g, hs)};
  AssemblyCache cache;
  cache.K2A = assemble_K2(g, hs.inner.A, Mat::Zero(2, 11));
  cache.K2B = assemble_K2(g, hs.inner.B, Mat::Zero(2, 11));
  const AssembledOperators a = assemble(g, hs, st);
  const AssembledOperators b = assemble(g, hs, st, &cache);
  EXPECT_LT((a.K2A - b.K2A).norm(), 1e-13);
  EXPECT_LT((a.K2B - b.K2B).norm(), 1e-13);
  EXPECT_LT((a.H - b.H).norm(), 1e-13);
}

namespace {

double semidiscrete_residual(const std::string& id, int N, double t) {
  const Problem p = make_problem(id);
  const HomogenizedSystem hs = homogenize(p.system);
  const ExactSolution ex = smooth_exact_solution();
  const Grid g = build_grid<double>(N);
  Mat V(2, N - 1), Vt(2, N - 1);
  for (int k = 1; k < N; ++k) {
    const double xi = g.nodes(k);
    const double x = hs.to_physical(xi);
    V.col(k - 1) = ex.u(x, t) - hs.lift(xi, t);
    Vt.col(k - 1) = ex.u_t(x, t) - hs.lift_dt(xi, t);
  }
  const State st{t, V};
  const auto [K, F] = semidiscrete_rhs(assemble(g, hs, st), st);
  return (K * flatten(Vt) - F).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Assemble, ManufacturedResidualDecaysSpectrally) {
  for (const std::string id : {"p1a", "p1b"})
    for (double t : {0.0, 0.6}) {
      const double r8 = semidiscrete_residual(id, 8, t);
      const double r16 = semidiscrete_residual(id, 16, t);
      const double r32 = semidiscrete_residual(id, 32, t);
      EXPECT_GT(r8 / r16, 10.0) << id << " t=" << t;
      EXPECT_TRUE(r16 / r32 > 10.0 || r32 < 1e-11) << id << " t=" << t << " " << r32;
    }
}
