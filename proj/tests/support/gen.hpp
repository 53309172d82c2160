#pragma once

// Hand-rolled generators for the property tests. Each property loops over a
// fixed range of seeds; CAPTURE(seed) in the caller makes failures replayable.

#include <cstdint>
#include <random>
#include <vector>

#include "jsr/matrix.hpp"
#include "jsr/matrix_set.hpp"

namespace gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed * 0x9E3779B97F4A7C15ULL + 1) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool coin(double p = 0.5) { return uniform() < p; }

 private:
  std::mt19937_64 eng_;
};

inline Eigen::MatrixXd raw(Rng& r, Eigen::Index n, double density = 1.0, double scale = 1.0) {
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = r.coin(density) ? scale * r.uniform(1e-3, 1.0) : 0.0;
  return a;
}

inline jsr::NonnegMatrix matrix(Rng& r, Eigen::Index n, double density = 1.0, double scale = 1.0) {
  return jsr::NonnegMatrix(raw(r, n, density, scale));
}

/// Strictly positive entries: every product is primitive, so equality
/// brackets close quickly.
inline jsr::NonnegMatrix positive(Rng& r, Eigen::Index n) { return matrix(r, n, 1.0, 1.0); }

inline jsr::MatrixSet set(Rng& r, Eigen::Index n, std::size_t size, double density = 1.0) {
  std::vector<jsr::NonnegMatrix> m;
  for (std::size_t k = 0; k < size; ++k) m.push_back(matrix(r, n, density));
  return jsr::MatrixSet(std::move(m));
}

inline std::vector<jsr::MatrixSet> sets(Rng& r, Eigen::Index n, std::size_t count,
                                        std::size_t size, double density = 1.0) {
  std::vector<jsr::MatrixSet> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(set(r, n, size, density));
  return out;
}

inline std::vector<double> convex_weights(Rng& r, std::size_t m) {
  std::vector<double> w(m);
  double s = 0;
  for (auto& x : w) s += (x = r.uniform(0.1, 1.0));
  for (auto& x : w) x /= s;
  // Force the sum to 1 within rounding.
  double t = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) t += w[i];
  w.back() = 1.0 - t;
  return w;
}

inline jsr::NonnegMatrix symmetric(Rng& r, Eigen::Index n) {
  Eigen::MatrixXd a = raw(r, n);
  return jsr::NonnegMatrix(Eigen::MatrixXd(0.5 * (a + a.transpose())));
}

inline jsr::NonnegMatrix permutation(Rng& r, Eigen::Index n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  for (int i = static_cast<int>(n) - 1; i > 0; --i)
    std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(r.integer(0, i))]);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, p[static_cast<std::size_t>(i)]) = 1.0;
  return jsr::NonnegMatrix(a);
}

inline bool rel_le(double a, double b, double tol) {
  return a <= b + tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool rel_eq(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace gen
