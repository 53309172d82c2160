#include "jsr/radius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jsr/hadamard.hpp"

namespace jsr {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;
constexpr long kWordIterationCap = 200'000;

// A nonnegative value mantissa * 2^exponent. Products along a word are kept
// in this form so that depth-20 words of large matrices do not overflow.
struct Scaled {
  double mantissa = 0.0;
  long exponent = 0;
};

bool greater(const Scaled& a, const Scaled& b) {
  if (b.mantissa == 0.0) return a.mantissa > 0.0;
  if (a.mantissa == 0.0) return false;
  const long shift = a.exponent - b.exponent;
  const long clamped = std::clamp(shift, -4000L, 4000L);
  return std::ldexp(a.mantissa, static_cast<int>(clamped)) > b.mantissa;
}

// (mantissa * 2^exponent)^(1/m). Splitting the exponent as q*m + r makes the
// result scale exactly by 2^k when every input matrix is scaled by 2^k.
double mth_root(const Scaled& v, int m) {
  if (v.mantissa == 0.0) return 0.0;
  long q = v.exponent / m;
  long r = v.exponent % m;
  if (r < 0) {
    r += m;
    --q;
  }
  const double base = m == 1 ? v.mantissa : std::pow(v.mantissa, 1.0 / m);
  const double frac = r == 0 ? 1.0 : std::exp2(static_cast<double>(r) / m);
  return std::ldexp(base * frac, static_cast<int>(q));
}

struct LevelRecord {
  Scaled best_lower;
  std::vector<std::size_t> lower_word;
  Scaled best_norm;
};

struct Enumeration {
  std::vector<LevelRecord> levels;  // index m - 1
};

bool all_members_equal(const MatrixSet& s) {
  return std::all_of(s.begin(), s.end(), [&](const NonnegMatrix& a) { return a == s[0]; });
}

// Depth-first walk over every word of length 1..depth with one renormalised
// product per level.
Enumeration enumerate_words(const MatrixSet& s, int depth, NormKind norm, bool want_lower,
                            const EstimatorOptions& opts) {
  if (depth < 1) throw DomainError("depth must be >= 1");
  const std::size_t words = word_count(s.size(), depth);
  if (words > opts.word_cap)
    throw CapExceeded("word enumeration of " + std::to_string(s.size()) + " members to depth " +
                          std::to_string(depth) + " exceeds the word cap",
                      opts.word_cap);

  const Index n = s.dim();
  const std::size_t letters = s.size();
  const double per_step = static_cast<double>(n + 1) * kUnitRoundoff;

  Enumeration out;
  out.levels.resize(static_cast<std::size_t>(depth));
  for (auto& lvl : out.levels) lvl.lower_word.assign(1, 0);

  std::vector<Eigen::MatrixXd> prod(static_cast<std::size_t>(depth) + 1,
                                    Eigen::MatrixXd::Identity(n, n));
  std::vector<long> expo(static_cast<std::size_t>(depth) + 1, 0);
  std::vector<std::size_t> word(static_cast<std::size_t>(depth), 0);

  // Iterative DFS: word[0..m-1] is the current word of length m.
  int m = 1;
  word[0] = 0;
  while (m >= 1) {
    const auto mi = static_cast<std::size_t>(m);
    const auto& letter = s[word[mi - 1]].entries();
    if (m == 1)
      prod[1] = letter;
    else
      prod[mi].noalias() = prod[mi - 1] * letter;

    bool descend = false;
    const double rs = row_sum_norm(prod[mi]);
    if (rs > 0.0) {
      int e = 0;
      std::frexp(rs, &e);
      prod[mi] *= std::ldexp(1.0, -e);
      expo[mi] = expo[mi - 1] + e;
      auto& lvl = out.levels[mi - 1];

      const double grow = 1.0 + static_cast<double>(m) * per_step;
      const double shrink = 1.0 - static_cast<double>(m) * per_step;
      const Scaled nrm{detail::norm_of(prod[mi], norm) * grow, expo[mi]};
      if (greater(nrm, lvl.best_norm)) lvl.best_norm = nrm;

      if (want_lower) {
        const auto cw = detail::collatz_wielandt(prod[mi], opts.word_tol, 0.0, kWordIterationCap);
        const Scaled lo{cw.lo * shrink, expo[mi]};
        if (greater(lo, lvl.best_lower)) {
          lvl.best_lower = lo;
          lvl.lower_word.assign(word.begin(), word.begin() + m);
        }
      }
      descend = m < depth;
    }
    // A zero product stays zero along every extension: prune.

    if (descend) {
      ++m;
      word[static_cast<std::size_t>(m) - 1] = 0;
      continue;
    }
    // Advance to the next sibling, backtracking as needed.
    while (m >= 1) {
      auto& w = word[static_cast<std::size_t>(m) - 1];
      if (++w < letters) break;
      --m;
    }
  }
  return out;
}

std::vector<double> lower_values(const Enumeration& e) {
  std::vector<double> v;
  for (std::size_t i = 0; i < e.levels.size(); ++i)
    v.push_back(mth_root(e.levels[i].best_lower, static_cast<int>(i) + 1));
  return v;
}

std::vector<double> upper_values(const Enumeration& e) {
  std::vector<double> v;
  for (std::size_t i = 0; i < e.levels.size(); ++i)
    v.push_back(mth_root(e.levels[i].best_norm, static_cast<int>(i) + 1));
  return v;
}

GenRadiusLower best_lower(const Enumeration& e, int depth) {
  GenRadiusLower g;
  g.depth = depth;
  g.witness.assign(1, 0);
  const auto vals = lower_values(e);
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (vals[i] > g.value) {
      g.value = vals[i];
      g.witness = e.levels[i].lower_word;
    }
  return g;
}

double best_upper(const Enumeration& e) {
  const auto vals = upper_values(e);
  return *std::min_element(vals.begin(), vals.end());
}

SymmetrizationSequence run_sequence(const MatrixSet& psi, double alpha, double beta,
                                    std::optional<double> beta_field, int n_max, int depth,
                                    NormKind k, const EstimatorOptions& opts) {
  if (n_max < 0) throw DomainError("symmetrization sequence: n_max must be >= 0");
  if (n_max > 30) throw CapExceeded("symmetrization sequence: 2^n_max words", opts.set_cap);
  std::vector<MatrixSet> sets;
  for (int n = 0; n <= n_max; ++n) {
    const MatrixSet power = set_power(psi, 1 << n, opts.set_cap);
    sets.push_back(symmetrize_ab(power, alpha, beta, opts.set_cap));
  }
  int d = depth;
  if (opts.word_budget > 0)
    for (const auto& t : sets) d = std::min(d, feasible_depth(t.size(), depth, opts.word_budget));

  SymmetrizationSequence seq;
  seq.alpha = alpha;
  seq.beta = beta_field;
  seq.depth = d;
  for (int n = 0; n <= n_max; ++n) {
    const auto& t = sets[static_cast<std::size_t>(n)];
    const auto b = radius_bracket_set(t, d, k, opts);
    seq.levels.push_back({n, raise(b, std::ldexp(1.0, -n)), t.size()});
  }
  const int target_depth =
      opts.word_budget > 0 ? feasible_depth(psi.size(), depth, opts.word_budget) : depth;
  seq.target = raise(radius_bracket_set(psi, target_depth, k, opts), alpha + beta);
  return seq;
}

}  // namespace

std::size_t word_count(std::size_t members, int depth) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  std::size_t level = 1;
  for (int k = 0; k < depth; ++k) {
    if (members != 0 && level > kMax / members) return kMax;
    level *= members;
    if (total > kMax - level) return kMax;
    total += level;
  }
  return total;
}

int feasible_depth(std::size_t members, int max_depth, std::size_t budget) {
  int d = 1;
  while (d < max_depth && word_count(members, d + 1) <= budget) ++d;
  return d;
}

GenRadiusLower gen_radius_lower(const MatrixSet& s, int depth, const EstimatorOptions& opts) {
  const auto e = enumerate_words(s, depth, NormKind::RowSum, true, opts);
  return best_lower(e, depth);
}

double joint_radius_upper(const MatrixSet& s, int depth, NormKind k,
                          const EstimatorOptions& opts) {
  return best_upper(enumerate_words(s, depth, k, false, opts));
}

RadiusBracket radius_bracket_set(const MatrixSet& s, int depth, NormKind k,
                                 const EstimatorOptions& opts) {
  const auto e = enumerate_words(s, depth, k, true, opts);
  RadiusBracket b{best_lower(e, depth).value, best_upper(e), depth, k};
  if (all_members_equal(s)) {
    // rho({A}) = rho(A): the single-matrix enclosure is exact up to tol.
    const auto cw = detail::collatz_wielandt(s[0].entries(), opts.word_tol, 0.0,
                                             kDefaultIterationCap);
    b.lo = std::max(b.lo, cw.lo);
    b.hi = std::min(b.hi, cw.hi);
  }
  if (b.lo > b.hi + 1e-9 * std::max(1.0, b.hi))
    throw std::logic_error("radius_bracket_set: lower bound exceeds upper bound");
  b.hi = std::max(b.hi, b.lo);
  return b;
}

RadiusBracket radius_bracket_budgeted(const MatrixSet& s, int max_depth, NormKind k,
                                      const EstimatorOptions& opts) {
  const int d =
      opts.word_budget > 0 ? feasible_depth(s.size(), max_depth, opts.word_budget) : max_depth;
  return radius_bracket_set(s, d, k, opts);
}

double GelfandSequence::lower_envelope(std::size_t i) const {
  double v = 0.0;
  for (std::size_t j = 0; j <= i && j < entries.size(); ++j) v = std::max(v, entries[j].lower);
  return v;
}

double GelfandSequence::upper_envelope(std::size_t i) const {
  double v = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= i && j < entries.size(); ++j) v = std::min(v, entries[j].upper);
  return v;
}

GelfandSequence gelfand_sequence(const MatrixSet& s, int depth, NormKind k,
                                 const EstimatorOptions& opts) {
  const auto e = enumerate_words(s, depth, k, true, opts);
  const auto lo = lower_values(e);
  const auto hi = upper_values(e);
  GelfandSequence g;
  g.norm = k;
  for (int m = 1; m <= depth; ++m) {
    const auto i = static_cast<std::size_t>(m - 1);
    g.entries.push_back({m, lo[i], hi[i]});
  }
  g.witness = best_lower(e, depth).witness;
  return g;
}

SymmetrizationSequence symmetrization_sequence(const MatrixSet& psi, double alpha, int n_max,
                                               int depth, NormKind k,
                                               const EstimatorOptions& opts) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("symmetrization_sequence: alpha must lie in [0, 1]");
  return run_sequence(psi, alpha, 1.0 - alpha, std::nullopt, n_max, depth, k, opts);
}

SymmetrizationSequence symmetrization_sequence_ab(const MatrixSet& psi, double alpha,
                                                  double beta, int n_max, int depth, NormKind k,
                                                  const EstimatorOptions& opts) {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || alpha + beta < 1.0 - 1e-12)
    throw DomainError("symmetrization_sequence_ab: need alpha, beta >= 0 and alpha + beta >= 1");
  return run_sequence(psi, alpha, beta, beta, n_max, depth, k, opts);
}

}  // namespace jsr
