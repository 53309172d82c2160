#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jsr/matrix.hpp"
#include "jsr/matrix_set.hpp"
#include "jsr/radius.hpp"

namespace jsr {

/// Relation between a link and the next one. `End` closes a sub-chain; a
/// report may hold several sub-chains back to back.
enum class Relation { Le, Eq, End };

struct ChainLink {
  std::string label;
  RadiusBracket bracket;
  Relation relation_to_next = Relation::End;
};

enum class Verdict { Verified, Indeterminate, Violated };

/// A link that was not evaluated because the parameters miss its hypothesis.
struct SkippedLink {
  std::string label;
  std::string reason;
};

struct ChainSettings {
  /// Maximum word depth for set radii; each link may use less under the
  /// word budget, and records the depth it actually used.
  int depth = 8;
  NormKind norm = NormKind::RowSum;
  EstimatorOptions estimator{50'000'000, 1e-12, 4096, kDefaultSetCap};
  /// Instance seed, recorded in the report for reproduction.
  std::uint64_t seed = 0;
  /// A required L_i <= L_j fails only if lo_i > hi_j + le_tol * max(1, hi_j).
  double le_tol = 1e-9;
  /// An equality link is decided once both brackets fit in a window of
  /// eq_tol * max(1, hi).
  double eq_tol = 1e-8;
};

struct ChainReport {
  std::string theorem_id;
  std::vector<ChainLink> links;
  Verdict verdict = Verdict::Verified;
  /// One entry per link whose relation is not End: for <=, the minimum over
  /// later links j of the sub-chain of hi_j - lo_i; for =, the signed overlap
  /// of the two brackets.
  std::vector<double> margins;
  std::vector<SkippedLink> skipped;
  std::vector<std::string> notes;
  ChainSettings settings;
};

enum class TheoremId {
  ZhanChain,
  Powers,
  Refin,
  Folge,
  KathypropEq,
  KathypropMat,
  Finally,
  Kathyth1,
  EqualitiesJoint,
  Kathyth2,
  Finally2,
  SymMono,
  GeomSym,
  SymMat,
  GeomSymMat,
};

std::string_view to_string(TheoremId id);
TheoremId parse_theorem_id(std::string_view s);
const std::vector<TheoremId>& all_theorems();
std::string_view to_string(Verdict v);
std::string_view to_string(Relation r);

/// Kernel mode needs convex weights; matrix mode admits sum >= 1.
enum class WeightMode { Kernel, Matrix };

/// grid[i][j]: row i, column j.
using SetGrid = std::vector<std::vector<MatrixSet>>;

/// Recomputes verdict and margins from the links (exposed for tests).
void evaluate_chain(ChainReport& report);

// Single-matrix chains.
ChainReport chain_zhan(const NonnegMatrix& a, const NonnegMatrix& b, double beta,
                       const ChainSettings& settings = {});
ChainReport chain_huang(std::span<const NonnegMatrix> mats, const ChainSettings& settings = {});

// Set chains.
ChainReport chain_powers(const std::vector<MatrixSet>& sets, const WeightVector& w, int n,
                         const ChainSettings& settings = {});
ChainReport chain_folge(const std::vector<MatrixSet>& sets, const WeightVector& w, double t, int n,
                        const ChainSettings& settings = {});
ChainReport chain_refin(const MatrixSet& psi, const MatrixSet& sigma, double beta,
                        const ChainSettings& settings = {});
ChainReport chain_kathyprop_eq(const MatrixSet& psi, const MatrixSet& sigma, const WeightVector& w,
                               double beta, const ChainSettings& settings = {});
ChainReport chain_kathyprop_mat(const MatrixSet& psi, int m, double alpha, int n,
                                const ChainSettings& settings = {});
ChainReport chain_finally(const SetGrid& grid, const WeightVector& w, int n, WeightMode mode,
                          const ChainSettings& settings = {});
ChainReport chain_kathyth1(const std::vector<MatrixSet>& sets, int n,
                           const ChainSettings& settings = {});
ChainReport chain_equalities_joint(const std::vector<MatrixSet>& sets, const WeightVector& w,
                                   double beta, const ChainSettings& settings = {});
ChainReport chain_kathyth2(const std::vector<MatrixSet>& sets, double alpha, int n,
                           const ChainSettings& settings = {});
ChainReport chain_finally2(const SetGrid& grid, const WeightVector& w, int n, WeightMode mode,
                           const ChainSettings& settings = {});
/// Without `ab`: the alpha in [0, 1] chains. With `ab` = (alpha, beta),
/// alpha + beta >= 1: the weighted matrix-mode chains.
ChainReport chain_geom_sym(const std::vector<MatrixSet>& sets, double alpha, int n,
                           const ChainSettings& settings = {},
                           std::optional<std::pair<double, double>> ab = std::nullopt);
/// r_0 <= r_1 <= ... <= r_levels <= r(Psi).
ChainReport chain_sym_mono(const MatrixSet& psi, double alpha, int levels,
                           const ChainSettings& settings = {});
/// r_0 <= ... <= r_levels <= r(Psi)^(alpha + beta).
ChainReport chain_sym_mat(const MatrixSet& psi, double alpha, double beta, int levels,
                          const ChainSettings& settings = {});

/// Checks sum_i prod_j f_ij^a_j <= prod_j (sum_i f_ij)^a_j componentwise,
/// within 1e-12 relative. f is indexed [i][j] (k rows, m columns).
bool scalar_mitr_check(const std::vector<std::vector<Eigen::VectorXd>>& f,
                       std::span<const double> exponents);

}  // namespace jsr
