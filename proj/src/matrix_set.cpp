#include "jsr/matrix_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "jsr/hadamard.hpp"

namespace jsr {

namespace {

constexpr double kRegimeTol = 1e-12;

std::size_t checked_count(std::size_t a, std::size_t b, std::size_t cap, const char* op) {
  if (a != 0 && b > cap / a)
    throw CapExceeded(std::string(op) + ": result would have more than " + std::to_string(cap) +
                          " members",
                      cap);
  const std::size_t n = a * b;
  if (n > cap)
    throw CapExceeded(std::string(op) + ": result would have " + std::to_string(n) + " members",
                      cap);
  return n;
}

void require_same_dim(const MatrixSet& a, const MatrixSet& b, const char* op) {
  if (a.dim() != b.dim())
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()) + ")");
}

bool entries_less(const NonnegMatrix& a, const NonnegMatrix& b) {
  const auto& x = a.entries();
  const auto& y = b.entries();
  return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(), y.data() + y.size());
}

std::vector<Eigen::MatrixXd> powered(const MatrixSet& s, double t) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(s.size());
  for (const auto& a : s) out.push_back(hadamard_pow(a.entries(), t));
  return out;
}

// All X o Y over x in xs (outer), y in ys (inner).
std::vector<Eigen::MatrixXd> pairwise_hadamard(const std::vector<Eigen::MatrixXd>& xs,
                                               const std::vector<Eigen::MatrixXd>& ys) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(xs.size() * ys.size());
  for (const auto& x : xs)
    for (const auto& y : ys) out.emplace_back(x.cwiseProduct(y));
  return out;
}

MatrixSet wrap(std::vector<Eigen::MatrixXd> raw) {
  std::vector<NonnegMatrix> members;
  members.reserve(raw.size());
  for (auto& m : raw) members.emplace_back(std::move(m));
  return MatrixSet(std::move(members));
}

}  // namespace

// --------------------------------------------------------------- MatrixSet

MatrixSet::MatrixSet(std::vector<NonnegMatrix> members, std::string name)
    : members_(std::move(members)), dim_(0), name_(std::move(name)) {
  if (members_.empty()) throw DimensionError("MatrixSet must be nonempty");
  dim_ = members_.front().dim();
  for (const auto& m : members_)
    if (m.dim() != dim_)
      throw DimensionError("MatrixSet members must share one dimension (" +
                           std::to_string(dim_) + " vs " + std::to_string(m.dim()) + ")");
}

MatrixSet MatrixSet::singleton(NonnegMatrix a, std::string name) {
  std::vector<NonnegMatrix> v;
  v.push_back(std::move(a));
  return MatrixSet(std::move(v), std::move(name));
}

// ------------------------------------------------------------ WeightVector

WeightVector::WeightVector(std::vector<double> weights, Regime regime)
    : weights_(std::move(weights)), regime_(regime) {
  if (weights_.empty()) throw DomainError("WeightVector must be nonempty");
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("weights must be positive and finite");
  const double s = sum();
  if (regime_ == Regime::Convex && std::abs(s - 1.0) > kRegimeTol)
    throw DomainError("convex weights must sum to 1, got " + std::to_string(s));
  if (regime_ == Regime::Super && s < 1.0 - kRegimeTol)
    throw DomainError("super weights must sum to at least 1, got " + std::to_string(s));
}

WeightVector WeightVector::uniform(std::size_t m) {
  if (m == 0) throw DomainError("WeightVector::uniform needs m >= 1");
  return convex(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

double WeightVector::sum() const noexcept {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

// -------------------------------------------------------------- operations

MatrixSet set_product(const MatrixSet& a, const MatrixSet& b, std::size_t cap) {
  require_same_dim(a, b, "set_product");
  checked_count(a.size(), b.size(), cap, "set_product");
  std::vector<NonnegMatrix> out;
  out.reserve(a.size() * b.size());
  Eigen::MatrixXd p(a.dim(), a.dim());
  for (const auto& x : a)
    for (const auto& y : b) {
      p.noalias() = x.entries() * y.entries();
      out.emplace_back(p);
    }
  return MatrixSet(std::move(out));
}

MatrixSet set_product(const std::vector<MatrixSet>& factors, std::size_t cap) {
  if (factors.empty()) throw DimensionError("set_product: no factors");
  std::size_t n = 1;
  for (const auto& f : factors) n = checked_count(n, f.size(), cap, "set_product");
  MatrixSet acc = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) acc = set_product(acc, factors[k], cap);
  return acc;
}

MatrixSet set_power(const MatrixSet& s, int m, std::size_t cap) {
  if (m < 1) throw DomainError("set_power: exponent must be >= 1");
  std::size_t n = 1;
  for (int k = 0; k < m; ++k) n = checked_count(n, s.size(), cap, "set_power");
  MatrixSet acc = s;
  for (int k = 1; k < m; ++k) acc = set_product(acc, s, cap);
  return acc;
}

MatrixSet set_hadamard_mean(const std::vector<MatrixSet>& sets, const WeightVector& w,
                            std::size_t cap) {
  if (sets.size() != w.size())
    throw DimensionError("set_hadamard_mean: " + std::to_string(sets.size()) + " sets but " +
                         std::to_string(w.size()) + " weights");
  std::size_t n = 1;
  for (const auto& s : sets) {
    require_same_dim(sets.front(), s, "set_hadamard_mean");
    n = checked_count(n, s.size(), cap, "set_hadamard_mean");
  }
  auto acc = powered(sets.front(), w[0]);
  for (std::size_t k = 1; k < sets.size(); ++k) acc = pairwise_hadamard(acc, powered(sets[k], w[k]));
  return wrap(std::move(acc));
}

MatrixSet set_hadamard_power(const MatrixSet& s, double t) {
  std::vector<NonnegMatrix> out;
  out.reserve(s.size());
  for (const auto& a : s) out.push_back(hadamard_power(a, t));
  return MatrixSet(std::move(out), s.name());
}

MatrixSet set_sum(const MatrixSet& a, const MatrixSet& b, std::size_t cap) {
  require_same_dim(a, b, "set_sum");
  checked_count(a.size(), b.size(), cap, "set_sum");
  std::vector<NonnegMatrix> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.emplace_back(x.entries() + y.entries());
  return MatrixSet(std::move(out));
}

MatrixSet set_sum(const std::vector<MatrixSet>& terms, std::size_t cap) {
  if (terms.empty()) throw DimensionError("set_sum: no terms");
  std::size_t n = 1;
  for (const auto& t : terms) n = checked_count(n, t.size(), cap, "set_sum");
  MatrixSet acc = terms.front();
  for (std::size_t k = 1; k < terms.size(); ++k) acc = set_sum(acc, terms[k], cap);
  return acc;
}

MatrixSet set_adjoint(const MatrixSet& s) {
  std::vector<NonnegMatrix> out;
  out.reserve(s.size());
  for (const auto& a : s) out.push_back(transpose(a));
  return MatrixSet(std::move(out), s.name().empty() ? std::string{} : s.name() + "*");
}

MatrixSet cyclic_factor(const std::vector<MatrixSet>& sets, std::size_t j, std::size_t cap) {
  const std::size_t m = sets.size();
  if (j < 1 || j > m)
    throw DomainError("cyclic_factor: index " + std::to_string(j) + " outside 1.." +
                      std::to_string(m));
  std::vector<MatrixSet> order;
  order.reserve(m);
  for (std::size_t k = 0; k < m; ++k) order.push_back(sets[(j - 1 + k) % m]);
  return set_product(order, cap);
}

MatrixSet symmetrize(const MatrixSet& s, double alpha, std::size_t cap) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("symmetrize: alpha must lie in [0, 1], got " + std::to_string(alpha));
  return symmetrize_ab(s, alpha, 1.0 - alpha, cap);
}

MatrixSet symmetrize_ab(const MatrixSet& s, double alpha, double beta, std::size_t cap) {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw DomainError("symmetrize_ab: exponents must be nonnegative");
  if (alpha + beta < 1.0 - kRegimeTol)
    throw DomainError("symmetrize_ab: alpha + beta must be >= 1, got " +
                      std::to_string(alpha + beta));
  // A missing factor is absent, not 0^0.
  if (beta == 0.0) return alpha == 1.0 ? s : set_hadamard_power(s, alpha);
  const MatrixSet adj = set_adjoint(s);
  if (alpha == 0.0) return beta == 1.0 ? adj : set_hadamard_power(adj, beta);
  checked_count(s.size(), s.size(), cap, "symmetrize");
  return wrap(pairwise_hadamard(powered(s, alpha), powered(adj, beta)));
}

MatrixSet dedupe(const MatrixSet& s, double tol) {
  if (!(tol >= 0.0)) throw DomainError("dedupe: tol must be nonnegative");
  std::vector<NonnegMatrix> kept;
  if (tol == 0.0) {
    auto less = [](const NonnegMatrix* a, const NonnegMatrix* b) { return entries_less(*a, *b); };
    std::set<const NonnegMatrix*, decltype(less)> seen(less);
    for (const auto& a : s)
      if (seen.insert(&a).second) kept.push_back(a);
  } else {
    for (const auto& a : s) {
      const bool dup = std::any_of(kept.begin(), kept.end(), [&](const NonnegMatrix& k) {
        return (k.entries() - a.entries()).cwiseAbs().maxCoeff() <= tol;
      });
      if (!dup) kept.push_back(a);
    }
  }
  return MatrixSet(std::move(kept), s.name());
}

MatrixSet canonical(const MatrixSet& s) {
  std::vector<NonnegMatrix> members = s.members();
  std::stable_sort(members.begin(), members.end(), entries_less);
  return MatrixSet(std::move(members), s.name());
}

bool same_multiset(const MatrixSet& a, const MatrixSet& b) {
  if (a.dim() != b.dim() || a.size() != b.size()) return false;
  const auto ca = canonical(a);
  const auto cb = canonical(b);
  return std::equal(ca.begin(), ca.end(), cb.begin());
}

bool same_members(const MatrixSet& a, const MatrixSet& b) {
  return same_multiset(dedupe(a), dedupe(b));
}

}  // namespace jsr
