#include "jsr/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jsr/hadamard.hpp"

namespace jsr {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_dim(const NonnegMatrix& a, const NonnegMatrix& b, const char* op) {
  if (a.dim() != b.dim())
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()) + ")");
}

// Groups the vertices of the directed graph i -> j (a(i, j) > 0) into
// strongly connected components via the transitive closure.
std::vector<std::vector<Index>> strongly_connected_components(
    const Eigen::Ref<const Eigen::MatrixXd>& a) {
  const Index n = a.rows();
  std::vector<char> reach(static_cast<std::size_t>(n * n));
  auto at = [&](Index i, Index j) -> char& { return reach[static_cast<std::size_t>(i * n + j)]; };
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) at(i, j) = (i == j) || a(i, j) > 0.0;
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i)
      if (at(i, k))
        for (Index j = 0; j < n; ++j)
          if (at(k, j)) at(i, j) = 1;

  std::vector<std::vector<Index>> comps;
  std::vector<char> assigned(static_cast<std::size_t>(n), 0);
  for (Index i = 0; i < n; ++i) {
    if (assigned[static_cast<std::size_t>(i)]) continue;
    std::vector<Index> comp;
    for (Index j = i; j < n; ++j)
      if (!assigned[static_cast<std::size_t>(j)] && at(i, j) && at(j, i)) {
        comp.push_back(j);
        assigned[static_cast<std::size_t>(j)] = 1;
      }
    comps.push_back(std::move(comp));
  }
  return comps;
}

struct BlockOutcome {
  double lo = 0.0;
  double hi = kInf;
  long applications = 0;
  bool converged = false;
};

// Collatz-Wielandt on an irreducible block of size >= 2. Power iteration
// runs on b + shift*I, which is primitive, so the ratio bounds converge even
// for periodic blocks; the bounds themselves are always taken for b.
BlockOutcome cw_irreducible(const Eigen::Ref<const Eigen::MatrixXd>& b, double tol,
                            double scale_floor, long budget) {
  const Index n = b.rows();
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd y(n);
  BlockOutcome out;
  double shift = -1.0;
  while (true) {
    y.noalias() = b * x;
    ++out.applications;
    double lo = kInf;
    double hi = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (!(x(i) > 0.0)) {
        lo = 0.0;
        hi = kInf;
        break;
      }
      const double r = y(i) / x(i);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    out.lo = std::max(out.lo, lo);
    out.hi = std::min(out.hi, hi);
    if (out.hi - out.lo <= tol * std::max(scale_floor, out.hi)) {
      out.converged = true;
      return out;
    }
    if (out.applications >= budget) return out;
    if (shift < 0.0) shift = 0.25 * (lo + (std::isfinite(hi) ? hi : lo));
    x = y + shift * x;
    const double top = x.maxCoeff();
    if (!(top > 0.0) || !std::isfinite(top)) return out;
    x /= top;
  }
}

}  // namespace

// ---------------------------------------------------------------- NonnegMatrix

NonnegMatrix::NonnegMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols())
    throw DimensionError("NonnegMatrix must be square, got " + std::to_string(entries_.rows()) +
                         "x" + std::to_string(entries_.cols()));
  if (entries_.rows() == 0) throw DimensionError("NonnegMatrix must have positive dimension");
  for (Index j = 0; j < entries_.cols(); ++j)
    for (Index i = 0; i < entries_.rows(); ++i) {
      const double v = entries_(i, j);
      if (!std::isfinite(v))
        throw DomainError("non-finite entry at (" + std::to_string(i) + ", " + std::to_string(j) +
                          ")");
      if (v < 0.0)
        throw DomainError("negative entry at (" + std::to_string(i) + ", " + std::to_string(j) +
                          ")");
    }
  // Normalise -0.0 so that bit-exact comparisons treat zeros alike.
  entries_ = entries_.unaryExpr([](double v) { return v == 0.0 ? 0.0 : v; });
}

namespace {
Eigen::MatrixXd from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != n)
      throw DimensionError("NonnegMatrix literal must be square");
    Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}
}  // namespace

NonnegMatrix::NonnegMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : NonnegMatrix(from_rows(rows)) {}

NonnegMatrix NonnegMatrix::zero(Index dim) { return NonnegMatrix(Eigen::MatrixXd::Zero(dim, dim)); }
NonnegMatrix NonnegMatrix::identity(Index dim) {
  return NonnegMatrix(Eigen::MatrixXd::Identity(dim, dim));
}
NonnegMatrix NonnegMatrix::ones(Index dim) { return NonnegMatrix(Eigen::MatrixXd::Ones(dim, dim)); }

// ------------------------------------------------------------------ NormKind

std::string_view to_string(NormKind k) {
  switch (k) {
    case NormKind::RowSum: return "row-sum";
    case NormKind::ColSum: return "col-sum";
    case NormKind::Spectral: return "spectral";
  }
  return "row-sum";
}

NormKind parse_norm_kind(std::string_view s) {
  if (s == "inf" || s == "row-sum" || s == "row") return NormKind::RowSum;
  if (s == "one" || s == "col-sum" || s == "col") return NormKind::ColSum;
  if (s == "two" || s == "spectral") return NormKind::Spectral;
  throw DomainError("unknown norm kind '" + std::string(s) + "' (expected inf, one or two)");
}

// ------------------------------------------------------------ RadiusBracket

RadiusBracket raise(const RadiusBracket& b, double exponent) {
  if (!(exponent >= 0.0)) throw DomainError("bracket exponent must be nonnegative");
  RadiusBracket r = b;
  if (exponent != 1.0) {
    r.lo = std::pow(b.lo, exponent);
    r.hi = std::pow(b.hi, exponent);
  }
  return r;
}

RadiusBracket operator*(const RadiusBracket& a, const RadiusBracket& b) {
  RadiusBracket r = a;
  r.lo = a.lo * b.lo;
  r.hi = a.hi * b.hi;
  r.depth = std::min(a.depth, b.depth);
  return r;
}

// -------------------------------------------------------------- operations

NonnegMatrix hadamard_product(const NonnegMatrix& a, const NonnegMatrix& b) {
  require_same_dim(a, b, "hadamard_product");
  return NonnegMatrix(hadamard(a.entries(), b.entries()));
}

NonnegMatrix hadamard_power(const NonnegMatrix& a, double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw DomainError("hadamard_power: exponent must be positive and finite, got " +
                      std::to_string(t));
  return NonnegMatrix(hadamard_pow(a.entries(), t));
}

NonnegMatrix weighted_hadamard_geometric_mean(std::span<const NonnegMatrix> matrices,
                                              std::span<const double> weights) {
  if (matrices.size() != weights.size())
    throw DimensionError("weighted_hadamard_geometric_mean: " + std::to_string(matrices.size()) +
                         " matrices but " + std::to_string(weights.size()) + " weights");
  if (matrices.empty()) throw DimensionError("weighted_hadamard_geometric_mean: no factors");
  const Index n = matrices.front().dim();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Ones(n, n);
  for (std::size_t k = 0; k < matrices.size(); ++k) {
    if (matrices[k].dim() != n)
      throw DimensionError("weighted_hadamard_geometric_mean: dimension mismatch");
    if (!(weights[k] > 0.0) || !std::isfinite(weights[k]))
      throw DomainError("weighted_hadamard_geometric_mean: weights must be positive");
    hadamard_pow_accumulate(acc, matrices[k].entries(), weights[k]);
  }
  return NonnegMatrix(std::move(acc));
}

NonnegMatrix matrix_product(const NonnegMatrix& a, const NonnegMatrix& b) {
  require_same_dim(a, b, "matrix_product");
  Eigen::MatrixXd p;
  p.noalias() = a.entries() * b.entries();
  return NonnegMatrix(std::move(p));
}

NonnegMatrix matrix_sum(const NonnegMatrix& a, const NonnegMatrix& b) {
  require_same_dim(a, b, "matrix_sum");
  return NonnegMatrix(a.entries() + b.entries());
}

NonnegMatrix transpose(const NonnegMatrix& a) { return NonnegMatrix(a.entries().transpose()); }

NonnegMatrix scaled(const NonnegMatrix& a, double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("scale factor must be nonnegative");
  return NonnegMatrix(c * a.entries());
}

double induced_norm(const NonnegMatrix& a, NormKind k) { return detail::norm_of(a.entries(), k); }

RadiusBracket spectral_radius_bracket(const NonnegMatrix& a, double tol) {
  if (!(tol > 0.0)) throw DomainError("spectral_radius_bracket: tol must be positive");
  const auto out = detail::collatz_wielandt(a.entries(), tol, 1.0, kDefaultIterationCap);
  RadiusBracket b{out.lo, out.hi, 1, NormKind::RowSum};
  if (!out.converged)
    throw ConvergenceError("spectral_radius_bracket: no convergence within " +
                               std::to_string(kDefaultIterationCap) + " applications",
                           b);
  return b;
}

namespace detail {

CwOutcome collatz_wielandt(const Eigen::Ref<const Eigen::MatrixXd>& a, double tol,
                           double scale_floor, long max_applications) {
  const Index n = a.rows();
  CwOutcome out;
  if (n == 0) {
    out.converged = true;
    return out;
  }
  const double slack = static_cast<double>(n + 2) * kUnitRoundoff;

  if (n == 1) {
    out.lo = out.hi = a(0, 0);
    out.converged = true;
    return out;
  }

  if ((a.array() > 0.0).all()) {
    const auto b = cw_irreducible(a, tol, scale_floor, max_applications);
    out = {b.lo * (1.0 - slack), b.hi * (1.0 + slack), b.applications, b.converged};
    return out;
  }

  auto comps = strongly_connected_components(a);
  // Largest row-sum bound first, so dominated blocks can be skipped.
  struct Block {
    std::vector<Index> idx;
    double bound;
  };
  std::vector<Block> blocks;
  blocks.reserve(comps.size());
  for (auto& c : comps) {
    double bound = 0.0;
    for (Index i : c) {
      double s = 0.0;
      for (Index j : c) s += a(i, j);
      bound = std::max(bound, s);
    }
    blocks.push_back({std::move(c), bound});
  }
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const Block& x, const Block& y) { return x.bound > y.bound; });

  out.converged = true;
  long budget = max_applications;
  for (const auto& blk : blocks) {
    if (blk.bound <= out.lo) continue;
    double lo = 0.0;
    double hi = 0.0;
    if (blk.idx.size() == 1) {
      lo = hi = a(blk.idx[0], blk.idx[0]);
    } else {
      const Eigen::MatrixXd sub = a(blk.idx, blk.idx);
      const auto b = cw_irreducible(sub, tol, scale_floor, std::max(1L, budget));
      out.applications += b.applications;
      budget -= b.applications;
      lo = b.lo;
      hi = b.hi;
      if (!b.converged) out.converged = false;
    }
    out.lo = std::max(out.lo, lo);
    out.hi = std::max(out.hi, hi);
  }
  out.lo *= 1.0 - slack;
  out.hi *= 1.0 + slack;
  return out;
}

double spectral_norm_upper(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  Eigen::MatrixXd gram;
  gram.noalias() = a.transpose() * a;
  const auto out = collatz_wielandt(gram, 1e-12, 0.0, kDefaultIterationCap);
  return std::sqrt(out.hi) * (1.0 + 2.0 * kUnitRoundoff);
}

double norm_of(const Eigen::Ref<const Eigen::MatrixXd>& a, NormKind k) {
  switch (k) {
    case NormKind::RowSum: return row_sum_norm(a);
    case NormKind::ColSum: return col_sum_norm(a);
    case NormKind::Spectral: return spectral_norm_upper(a);
  }
  return row_sum_norm(a);
}

}  // namespace detail

}  // namespace jsr
