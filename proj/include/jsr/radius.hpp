#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "jsr/matrix.hpp"
#include "jsr/matrix_set.hpp"

namespace jsr {

/// Tunables shared by the word-enumeration estimators.
struct EstimatorOptions {
  /// Hard limit on the number of words visited by one enumeration.
  std::size_t word_cap = 50'000'000;
  /// Relative tolerance of the per-word spectral radius brackets.
  double word_tol = 1e-12;
  /// When nonzero, callers that choose their own depth (chains, sequences)
  /// lower it until the enumeration visits at most this many words.
  std::size_t word_budget = 0;
  /// Cardinality cap for sets materialised along the way.
  std::size_t set_cap = kDefaultSetCap;
};

/// Number of words of length 1..depth over an alphabet of `members` letters,
/// saturating at SIZE_MAX.
std::size_t word_count(std::size_t members, int depth);

/// Largest d in [1, max_depth] whose enumeration stays within `budget` words.
/// Always at least 1.
int feasible_depth(std::size_t members, int max_depth, std::size_t budget);

struct GenRadiusLower {
  double value = 0.0;
  /// Member indices of the maximising word, left to right.
  std::vector<std::size_t> witness;
  int depth = 1;
};

/// max over m <= depth and words w of length m of rho_lo(w)^(1/m); a
/// certified lower bound for the generalized spectral radius.
GenRadiusLower gen_radius_lower(const MatrixSet& s, int depth, const EstimatorOptions& opts = {});

/// min over m <= depth of (max over words of length m of ||w||)^(1/m); a
/// certified upper bound for the joint spectral radius.
double joint_radius_upper(const MatrixSet& s, int depth, NormKind k = NormKind::RowSum,
                          const EstimatorOptions& opts = {});

/// [gen_radius_lower, joint_radius_upper]. For finite sets of matrices the
/// two radii coincide, so the bracket encloses both.
RadiusBracket radius_bracket_set(const MatrixSet& s, int depth, NormKind k = NormKind::RowSum,
                                 const EstimatorOptions& opts = {});

/// radius_bracket_set at feasible_depth(|s|, max_depth, opts.word_budget).
RadiusBracket radius_bracket_budgeted(const MatrixSet& s, int max_depth, NormKind k,
                                      const EstimatorOptions& opts);

struct GelfandEntry {
  int m = 1;
  double lower = 0.0;
  double upper = 0.0;
};

struct GelfandSequence {
  std::vector<GelfandEntry> entries;
  NormKind norm = NormKind::RowSum;
  std::vector<std::size_t> witness;

  /// Running max of lower values up to index i.
  double lower_envelope(std::size_t i) const;
  /// Running min of upper values up to index i.
  double upper_envelope(std::size_t i) const;
};

GelfandSequence gelfand_sequence(const MatrixSet& s, int depth, NormKind k = NormKind::RowSum,
                                 const EstimatorOptions& opts = {});

struct SymmetrizationLevel {
  int n = 0;
  RadiusBracket r;
  std::size_t members = 0;
};

struct SymmetrizationSequence {
  double alpha = 0.5;
  std::optional<double> beta;
  std::vector<SymmetrizationLevel> levels;
  /// Bracket of r(Psi)^(alpha + beta), the terminal comparison target.
  RadiusBracket target;
  /// Depth used uniformly at every level.
  int depth = 1;
};

/// r_n = r(S_alpha(Psi^(2^n)))^(2^-n) for n = 0..n_max, all levels at one
/// common depth (lowered under opts.word_budget when that is set).
SymmetrizationSequence symmetrization_sequence(const MatrixSet& psi, double alpha, int n_max,
                                               int depth, NormKind k = NormKind::RowSum,
                                               const EstimatorOptions& opts = {});

/// As above with S_{alpha,beta}; target is r(Psi)^(alpha + beta).
SymmetrizationSequence symmetrization_sequence_ab(const MatrixSet& psi, double alpha,
                                                  double beta, int n_max, int depth,
                                                  NormKind k = NormKind::RowSum,
                                                  const EstimatorOptions& opts = {});

}  // namespace jsr
