#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "jsr/errors.hpp"

namespace jsr {

using Index = Eigen::Index;

/// Dense square matrix with finite nonnegative entries.
///
/// Every constructor validates the invariant, so any NonnegMatrix in
/// circulation is square, finite and entrywise >= 0. Equality is bit-exact.
class NonnegMatrix {
 public:
  explicit NonnegMatrix(Eigen::MatrixXd entries);

  /// Row-major construction, mostly for tests and literals.
  NonnegMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static NonnegMatrix zero(Index dim);
  static NonnegMatrix identity(Index dim);
  static NonnegMatrix ones(Index dim);

  Index dim() const noexcept { return entries_.rows(); }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  double operator()(Index i, Index j) const { return entries_(i, j); }

  friend bool operator==(const NonnegMatrix& a, const NonnegMatrix& b) {
    return a.dim() == b.dim() && a.entries_ == b.entries_;
  }

 private:
  Eigen::MatrixXd entries_;
};

/// Induced operator norms: row-sum (l^inf), col-sum (l^1), spectral (l^2).
enum class NormKind { RowSum, ColSum, Spectral };

std::string_view to_string(NormKind k);
/// Accepts the CLI spellings "inf", "one", "two" and the long names.
NormKind parse_norm_kind(std::string_view s);

/// Certified enclosure lo <= value <= hi, with the depth and norm that
/// produced it.
struct RadiusBracket {
  double lo = 0.0;
  double hi = 0.0;
  int depth = 1;
  NormKind norm = NormKind::RowSum;

  double width() const noexcept { return hi - lo; }
  bool contains(double v, double slack = 0.0) const noexcept {
    return lo - slack <= v && v <= hi + slack;
  }
};

/// Raises both endpoints to a nonnegative power (monotone map).
RadiusBracket raise(const RadiusBracket& b, double exponent);
/// Endpoint-wise product of two brackets of nonnegative quantities.
RadiusBracket operator*(const RadiusBracket& a, const RadiusBracket& b);

inline constexpr double kDefaultRadiusTol = 1e-9;
inline constexpr long kDefaultIterationCap = 1'000'000;

/// Raised when the Collatz-Wielandt iteration does not meet its tolerance
/// within the iteration cap. The best certified bracket found so far is kept.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, RadiusBracket best)
      : Error(what), best_(best) {}
  const RadiusBracket& best() const noexcept { return best_; }

 private:
  RadiusBracket best_;
};

NonnegMatrix hadamard_product(const NonnegMatrix& a, const NonnegMatrix& b);
NonnegMatrix hadamard_power(const NonnegMatrix& a, double t);
NonnegMatrix weighted_hadamard_geometric_mean(std::span<const NonnegMatrix> matrices,
                                              std::span<const double> weights);
NonnegMatrix matrix_product(const NonnegMatrix& a, const NonnegMatrix& b);
NonnegMatrix matrix_sum(const NonnegMatrix& a, const NonnegMatrix& b);
NonnegMatrix transpose(const NonnegMatrix& a);
NonnegMatrix scaled(const NonnegMatrix& a, double c);

double induced_norm(const NonnegMatrix& a, NormKind k);

/// Certified bracket [lo, hi] for the spectral radius, with
/// hi - lo <= tol * max(1, hi).
RadiusBracket spectral_radius_bracket(const NonnegMatrix& a, double tol = kDefaultRadiusTol);

namespace detail {

/// Collatz-Wielandt enclosure of rho(a) for a nonnegative matrix given as a
/// raw Eigen matrix. Stops when hi - lo <= tol * max(scale_floor, hi).
/// The matrix is split into its strongly connected components first, so
/// reducible and periodic inputs converge as well as primitive ones.
struct CwOutcome {
  double lo = 0.0;
  double hi = 0.0;
  long applications = 0;
  bool converged = false;
};
CwOutcome collatz_wielandt(const Eigen::Ref<const Eigen::MatrixXd>& a, double tol,
                           double scale_floor, long max_applications);

/// Upper bound for the l^2 operator norm of a nonnegative matrix.
double spectral_norm_upper(const Eigen::Ref<const Eigen::MatrixXd>& a);

double norm_of(const Eigen::Ref<const Eigen::MatrixXd>& a, NormKind k);

}  // namespace detail

}  // namespace jsr
