#include "pps/gni_assembly.hpp"

#include <vector>

#include "pps/errors.hpp"

namespace pps {

Vec flatten(const Mat& U) {
  const Mat Ut = U.transpose();
  return Eigen::Map<const Vec>(Ut.data(), Ut.size());
}

Mat unflatten(const Vec& v, int d) {
  const int n = static_cast<int>(v.size()) / d;
  return Eigen::Map<const Mat>(v.data(), n, d).transpose();
}

Mat with_zero_boundary(const Mat& U) {
  Mat full = Mat::Zero(U.rows(), U.cols() + 2);
  full.middleCols(1, U.cols()) = U;
  return full;
}

namespace {

std::vector<Mat> evaluate_nodes(const MatrixFn& f, const Mat& nodal) {
  std::vector<Mat> out;
  out.reserve(nodal.cols());
  for (int h = 0; h < nodal.cols(); ++h) out.push_back(f(nodal.col(h)));
  return out;
}

Vec entry(const std::vector<Mat>& vals, int p, int q) {
  Vec c(vals.size());
  for (std::size_t h = 0; h < vals.size(); ++h) c(h) = vals[h](p, q);
  return c;
}

void check_shape(const Grid& g, const Mat& nodal) {
  if (nodal.cols() != g.N + 1)
    throw DomainError("assembly: nodal states must have N+1 columns");
}

Mat K2_from_values(const Grid& g, const std::vector<Mat>& vals, int d) {
  const int n = g.N - 1;
  const auto Dint = g.D1_interior_cols();
  Mat K = Mat::Zero(d * n, d * n);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) {
      const Vec c = entry(vals, p, q);
      if (c.isZero(0.0)) continue;
      const Mat WD = (g.weights.array() * c.array()).matrix().asDiagonal() * Dint;
      K.block(p * n, q * n, n, n).noalias() = Dint.transpose() * WD;
    }
  return K;
}

Mat K1_from_values(const Grid& g, const std::vector<Mat>& vals, int d) {
  const int n = g.N - 1;
  const auto Dii = g.D1.block(1, 1, n, n);
  Mat K = Mat::Zero(d * n, d * n);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) {
      const Vec c = entry(vals, p, q).segment(1, n);
      if (c.isZero(0.0)) continue;
      K.block(p * n, q * n, n, n) =
          (g.weights.segment(1, n).array() * c.array()).matrix().asDiagonal() *
          Dii;
    }
  return K;
}

/// sum_q Dint^T diag(w c_pq) f_q for every p, where f holds nodal vectors.
Vec stiffness_apply(const Grid& g, const std::vector<Mat>& vals,
                    const Mat& f) {
  const int d = static_cast<int>(f.rows());
  const int n = g.N - 1;
  const auto Dint = g.D1_interior_cols();
  Vec out = Vec::Zero(d * n);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) {
      const Vec c = entry(vals, p, q);
      if (c.isZero(0.0)) continue;
      const Vec wf = g.weights.array() * c.array() * f.row(q).transpose().array();
      out.segment(p * n, n) += Dint.transpose() * wf;
    }
  return out;
}

}  // namespace

Mat assemble_K2(const Grid& g, const MatrixFn& coeff, const Mat& nodal) {
  check_shape(g, nodal);
  return K2_from_values(g, evaluate_nodes(coeff, nodal),
                        static_cast<int>(nodal.rows()));
}

Mat assemble_K2(const Grid& g, const MatrixFn& coeff, const State& s) {
  return assemble_K2(g, coeff, with_zero_boundary(s.U));
}

Mat assemble_K1(const Grid& g, const MatrixFn& dG, const Mat& nodal) {
  check_shape(g, nodal);
  return K1_from_values(g, evaluate_nodes(dG, nodal),
                        static_cast<int>(nodal.rows()));
}

Mat assemble_K1(const Grid& g, const MatrixFn& dG, const State& s) {
  return assemble_K1(g, dG, with_zero_boundary(s.U));
}

Vec assemble_H(const Grid& g, const SourceFn& gamma, const Mat& nodal,
               double t) {
  check_shape(g, nodal);
  const int d = static_cast<int>(nodal.rows());
  const int n = g.N - 1;
  Vec H(d * n);
  for (int k = 1; k < g.N; ++k) {
    const Vec v = gamma(nodal.col(k), g.nodes(k), t);
    for (int p = 0; p < d; ++p) H(p * n + k - 1) = g.weights(k) * v(p);
  }
  return H;
}

Vec assemble_H(const Grid& g, const SourceFn& gamma, const State& s) {
  return assemble_H(g, gamma, with_zero_boundary(s.U), s.t);
}

Mat assemble_K0(const Grid& g, int d) {
  const int n = g.N - 1;
  Vec diag(d * n);
  for (int p = 0; p < d; ++p) diag.segment(p * n, n) = g.weights.segment(1, n);
  return diag.asDiagonal();
}

AssembledOperators assemble(const Grid& g, const HomogenizedSystem& hs,
                            const State& s, const AssemblyCache* cache) {
  const SystemDef& sys = hs.inner;
  const int d = sys.d;
  const int n = g.N - 1;
  if (s.U.rows() != d || s.U.cols() != n)
    throw DomainError("assemble: state shape mismatch");

  Mat lift(d, g.N + 1), lift_dt(d, g.N + 1);
  for (int h = 0; h <= g.N; ++h) {
    lift.col(h) = hs.lift(g.nodes(h), s.t);
    lift_dt.col(h) = hs.lift_dt(g.nodes(h), s.t);
  }
  Mat total = lift;
  total.middleCols(1, n) += s.U;
  const bool has_lift = !lift.isZero(0.0);
  const bool has_lift_dt = !lift_dt.isZero(0.0);

  AssembledOperators ops;
  ops.K0 = assemble_K0(g, d);

  const bool needA = !(cache && cache->K2A);
  const bool needB = !(cache && cache->K2B);
  std::vector<Mat> Avals, Bvals;
  if (needA || has_lift_dt) Avals = evaluate_nodes(sys.A, total);
  if (needB || has_lift) Bvals = evaluate_nodes(sys.B, total);
  ops.K2A = needA ? K2_from_values(g, Avals, d) : *cache->K2A;
  ops.K2B = needB ? K2_from_values(g, Bvals, d) : *cache->K2B;

  const std::vector<Mat> gvals = evaluate_nodes(sys.dG, total);
  ops.K1G = K1_from_values(g, gvals, d);

  ops.H = assemble_H(g, sys.gamma, total, s.t);
  if (has_lift) {
    const Mat Dlift = (g.D1 * lift.transpose()).transpose();
    ops.H += stiffness_apply(g, Bvals, Dlift);
    for (int p = 0; p < d; ++p)
      for (int k = 1; k < g.N; ++k) {
        double acc = 0.0;
        for (int q = 0; q < d; ++q) acc += gvals[k](p, q) * Dlift(q, k);
        ops.H(p * n + k - 1) += g.weights(k) * acc;
      }
  }
  if (has_lift_dt) {
    const Mat Dlift_dt = (g.D1 * lift_dt.transpose()).transpose();
    ops.H -= stiffness_apply(g, Avals, Dlift_dt);
    for (int p = 0; p < d; ++p)
      for (int k = 1; k < g.N; ++k)
        ops.H(p * n + k - 1) -= g.weights(k) * lift_dt(p, k);
  }
  return ops;
}

std::pair<Mat, Vec> semidiscrete_rhs(const AssembledOperators& ops,
                                     const State& s) {
  Mat K = ops.K0 + ops.K2A;
  Vec F = ops.K2B * flatten(s.U) + ops.K1G * flatten(s.U) + ops.H;
  return {std::move(K), std::move(F)};
}

Mat initial_state(const Grid& g, const HomogenizedSystem& hs) {
  const int d = hs.inner.d;
  Mat U(d, g.N - 1);
  for (int k = 1; k < g.N; ++k) U.col(k - 1) = hs.inner.u0(g.nodes(k));
  return U;
}

}  // namespace pps
