#pragma once

// Entrywise (Hadamard) algebra on plain Eigen dense expressions. These are
// the unchecked kernels behind the NonnegMatrix operations; they accept any
// real scalar type and never validate their inputs.

#include <cmath>

#include <Eigen/Dense>

namespace jsr {

/// A ∘ B as a lazy Eigen expression.
template <typename DerivedA, typename DerivedB>
auto hadamard(const Eigen::MatrixBase<DerivedA>& a,
              const Eigen::MatrixBase<DerivedB>& b) {
  return a.cwiseProduct(b);
}

/// A^(t), evaluated. 0^t = 0 for t > 0; t == 1 returns an exact copy.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
hadamard_pow(const Eigen::MatrixBase<Derived>& a, typename Derived::Scalar t) {
  using Scalar = typename Derived::Scalar;
  if (t == Scalar(1)) return a;
  return a.unaryExpr([t](Scalar x) { return x == Scalar(0) ? Scalar(0) : std::pow(x, t); });
}

/// Multiplies `acc` entrywise by A^(t) in place.
template <typename DerivedAcc, typename Derived>
void hadamard_pow_accumulate(Eigen::MatrixBase<DerivedAcc>& acc,
                             const Eigen::MatrixBase<Derived>& a,
                             typename Derived::Scalar t) {
  using Scalar = typename Derived::Scalar;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const Scalar x = a(i, j);
      acc(i, j) *= (t == Scalar(1) || x == Scalar(0)) ? x : std::pow(x, t);
    }
}

template <typename Derived>
typename Derived::Scalar row_sum_norm(const Eigen::MatrixBase<Derived>& a) {
  return a.rowwise().sum().maxCoeff();
}

template <typename Derived>
typename Derived::Scalar col_sum_norm(const Eigen::MatrixBase<Derived>& a) {
  return a.colwise().sum().maxCoeff();
}

}  // namespace jsr
