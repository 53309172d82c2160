#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "jsr/matrix.hpp"

namespace jsr {

/// Default limit on the cardinality of any constructed set. Exceeding it is
/// an error, never a silent truncation.
inline constexpr std::size_t kDefaultSetCap = 200'000;

/// Finite nonempty list of same-dimension nonnegative matrices. Duplicates
/// are allowed; radius quantities do not depend on them.
class MatrixSet {
 public:
  explicit MatrixSet(std::vector<NonnegMatrix> members, std::string name = {});

  static MatrixSet singleton(NonnegMatrix a, std::string name = {});

  Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return members_.size(); }
  const std::vector<NonnegMatrix>& members() const noexcept { return members_; }
  const NonnegMatrix& operator[](std::size_t i) const { return members_[i]; }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

 private:
  std::vector<NonnegMatrix> members_;
  Index dim_;
  std::string name_;
};

/// Positive weights with a declared regime: convex (sum = 1) or super
/// (sum >= 1, admissible only for the matrix-mode inequalities).
class WeightVector {
 public:
  enum class Regime { Convex, Super };

  WeightVector(std::vector<double> weights, Regime regime);

  static WeightVector convex(std::vector<double> weights) {
    return {std::move(weights), Regime::Convex};
  }
  static WeightVector super(std::vector<double> weights) {
    return {std::move(weights), Regime::Super};
  }
  static WeightVector uniform(std::size_t m);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& values() const noexcept { return weights_; }
  Regime regime() const noexcept { return regime_; }
  double sum() const noexcept;

 private:
  std::vector<double> weights_;
  Regime regime_;
};

MatrixSet set_product(const MatrixSet& a, const MatrixSet& b, std::size_t cap = kDefaultSetCap);
/// Product of several sets in order; a single set is returned unchanged.
MatrixSet set_product(const std::vector<MatrixSet>& factors, std::size_t cap = kDefaultSetCap);
MatrixSet set_power(const MatrixSet& s, int m, std::size_t cap = kDefaultSetCap);
MatrixSet set_hadamard_mean(const std::vector<MatrixSet>& sets, const WeightVector& w,
                            std::size_t cap = kDefaultSetCap);
MatrixSet set_hadamard_power(const MatrixSet& s, double t);
MatrixSet set_sum(const MatrixSet& a, const MatrixSet& b, std::size_t cap = kDefaultSetCap);
MatrixSet set_sum(const std::vector<MatrixSet>& terms, std::size_t cap = kDefaultSetCap);
MatrixSet set_adjoint(const MatrixSet& s);
/// Psi_j ... Psi_m Psi_1 ... Psi_{j-1}; j is 1-based.
MatrixSet cyclic_factor(const std::vector<MatrixSet>& sets, std::size_t j,
                        std::size_t cap = kDefaultSetCap);
/// { A^(alpha) o (B^T)^(1-alpha) : A, B in s }, with S_1 = s and S_0 = s^T.
MatrixSet symmetrize(const MatrixSet& s, double alpha, std::size_t cap = kDefaultSetCap);
/// { A^(alpha) o (B^T)^(beta) : A, B in s }; requires alpha + beta >= 1.
MatrixSet symmetrize_ab(const MatrixSet& s, double alpha, double beta,
                        std::size_t cap = kDefaultSetCap);
/// Drops members within max-entry distance tol of an earlier kept member.
MatrixSet dedupe(const MatrixSet& s, double tol = 0.0);

/// Members sorted lexicographically by their column-major entries.
MatrixSet canonical(const MatrixSet& s);
/// Set equality after canonical ordering and exact dedupe, bit-exact.
bool same_members(const MatrixSet& a, const MatrixSet& b);
/// Multiset equality after canonical ordering, bit-exact.
bool same_multiset(const MatrixSet& a, const MatrixSet& b);

}  // namespace jsr
