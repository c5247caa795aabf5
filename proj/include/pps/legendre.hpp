#pragma once

#include <cmath>
#include <utility>

#include "pps/errors.hpp"

namespace pps {

/// Value of the Legendre polynomial L_k at x by the three-term recurrence
/// (k+1) L_{k+1} = (2k+1) x L_k - k L_{k-1}.
template <typename Scalar>
Scalar legendre_eval(int k, Scalar x) {
  using std::abs;
  if (k < 0) throw DomainError("legendre_eval: negative degree");
  if (abs(x) > Scalar(1) + Scalar(1e-12))
    throw DomainError("legendre_eval: |x| > 1");
  if (k == 0) return Scalar(1);
  Scalar prev(1), cur = x;
  for (int j = 1; j < k; ++j) {
    const Scalar next = (Scalar(2 * j + 1) * x * cur - Scalar(j) * prev) /
                        Scalar(j + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// (L_k(x), L_k'(x)) using L'_{j+1} = L'_{j-1} + (2j+1) L_j.
template <typename Scalar>
std::pair<Scalar, Scalar> legendre_eval_with_derivative(int k, Scalar x) {
  if (k < 0) throw DomainError("legendre_eval: negative degree");
  if (k == 0) return {Scalar(1), Scalar(0)};
  Scalar p_prev(1), p_cur = x;
  Scalar d_prev(0), d_cur(1);
  for (int j = 1; j < k; ++j) {
    const Scalar p_next =
        (Scalar(2 * j + 1) * x * p_cur - Scalar(j) * p_prev) / Scalar(j + 1);
    const Scalar d_next = d_prev + Scalar(2 * j + 1) * p_cur;
    p_prev = p_cur;
    p_cur = p_next;
    d_prev = d_cur;
    d_cur = d_next;
  }
  return {p_cur, d_cur};
}

}  // namespace pps
