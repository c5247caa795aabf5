#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "pps/errors.hpp"

namespace pps {

/// Solver for K X = rhs. With two equal diagonal blocks,
///   K = [K11 K12; K21 K22] = [K11 0; K21 L22] [I K11^{-1}K12; 0 U22],
/// where L22 U22 is the LU factorization of the Schur complement
/// K22 - K21 K11^{-1} K12. Otherwise a dense LU of K is used.
template <typename Scalar>
class BlockLU {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  static constexpr double kMinRcond = 1e-14;

  BlockLU() = default;

  /// block_size > 0 with K.rows() == 2 * block_size selects the block path.
  BlockLU(const Matrix& K, Eigen::Index block_size) { compute(K, block_size); }

  void compute(const Matrix& K, Eigen::Index block_size) {
    n_ = K.rows();
    if (block_size > 0 && 2 * block_size == n_) {
      m_ = block_size;
      blocked_ = true;
      const auto K11 = K.topLeftCorner(m_, m_);
      const auto K12 = K.topRightCorner(m_, m_);
      K21_ = K.bottomLeftCorner(m_, m_);
      lu11_.compute(K11);
      check(lu11_, SingularBlock::K11, "K11");
      coupled_ = !K12.isZero(0.0);
      Matrix S = K.bottomRightCorner(m_, m_);
      if (coupled_) {
        Ktilde_ = lu11_.solve(K12);
        S.noalias() -= K21_ * Ktilde_;
      }
      lower_coupled_ = !K21_.isZero(0.0);
      lu22_.compute(S);
      check(lu22_, SingularBlock::Schur, "Schur complement");
    } else {
      blocked_ = false;
      lu_.compute(K);
      check(lu_, SingularBlock::Full, "mass matrix");
    }
  }

  Vector solve(const Vector& rhs) const {
    if (!blocked_) return lu_.solve(rhs);
    Vector X(n_);
    const Vector Y1 = lu11_.solve(rhs.head(m_));
    Vector r2 = rhs.tail(m_);
    if (lower_coupled_) r2.noalias() -= K21_ * Y1;
    X.tail(m_) = lu22_.solve(r2);
    X.head(m_) = Y1;
    if (coupled_) X.head(m_).noalias() -= Ktilde_ * X.tail(m_);
    return X;
  }

  bool blocked() const { return blocked_; }

 private:
  using LU = Eigen::PartialPivLU<Matrix>;

  static void check(const LU& lu, SingularBlock which, const char* name) {
    const double rc = static_cast<double>(lu.rcond());
    if (!(rc > kMinRcond) || !std::isfinite(rc))
      throw SingularMatrixError(std::string("singular ") + name +
                                    " (reciprocal condition " +
                                    std::to_string(rc) + ")",
                                which, rc);
  }

  Eigen::Index n_ = 0;
  Eigen::Index m_ = 0;
  bool blocked_ = false;
  bool coupled_ = false;
  bool lower_coupled_ = false;
  LU lu11_, lu22_, lu_;
  Matrix K21_, Ktilde_;
};

/// One-shot block solve.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> block_lu_solve(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& K,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& rhs,
    Eigen::Index block_size) {
  return BlockLU<Scalar>(K, block_size).solve(rhs);
}

}  // namespace pps
