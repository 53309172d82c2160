#include "jsr/chains.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace jsr {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// Hadamard mean of (set, exponent) factors. A factor with exponent 0 is
// dropped rather than raised to 0^0.
MatrixSet hmean(const std::vector<std::pair<const MatrixSet*, double>>& factors,
                std::size_t cap) {
  std::vector<MatrixSet> sets;
  std::vector<double> w;
  for (const auto& [s, t] : factors) {
    if (t < 0.0) throw DomainError("negative Hadamard exponent");
    if (t == 0.0) continue;
    sets.push_back(*s);
    w.push_back(t);
  }
  if (sets.empty()) throw DomainError("Hadamard mean with no positive exponent");
  if (sets.size() == 1) return w[0] == 1.0 ? sets[0] : set_hadamard_power(sets[0], w[0]);
  return set_hadamard_mean(sets, WeightVector(w, WeightVector::Regime::Super), cap);
}

MatrixSet hmean_same(const std::vector<MatrixSet>& sets, const std::vector<double>& w,
                     std::size_t cap) {
  std::vector<std::pair<const MatrixSet*, double>> f;
  for (std::size_t i = 0; i < sets.size(); ++i) f.emplace_back(&sets[i], w[i]);
  return hmean(f, cap);
}

std::vector<MatrixSet> powers_of(const std::vector<MatrixSet>& sets, int n, std::size_t cap) {
  std::vector<MatrixSet> out;
  for (const auto& s : sets) out.push_back(set_power(s, n, cap));
  return out;
}

std::vector<MatrixSet> cyclic_all(const std::vector<MatrixSet>& sets, std::size_t cap) {
  std::vector<MatrixSet> out;
  for (std::size_t j = 1; j <= sets.size(); ++j) out.push_back(cyclic_factor(sets, j, cap));
  return out;
}

void require_sets(const std::vector<MatrixSet>& sets, const char* op) {
  if (sets.empty()) throw DimensionError(std::string(op) + ": no sets");
  for (const auto& s : sets)
    if (s.dim() != sets.front().dim())
      throw DimensionError(std::string(op) + ": dimension mismatch");
}

void require_n(int n, const char* op) {
  if (n < 1) throw DomainError(std::string(op) + ": n must be >= 1");
}

class Builder {
 public:
  Builder(std::string id, const ChainSettings& s) : s_(s) {
    report_.theorem_id = std::move(id);
    report_.settings = s;
  }

  std::size_t cap() const { return s_.estimator.set_cap; }

  RadiusBracket r(const MatrixSet& set) const {
    return radius_bracket_budgeted(set, s_.depth, s_.norm, s_.estimator);
  }

  RadiusBracket rho(const NonnegMatrix& a) const {
    auto b = radius_bracket_set(MatrixSet::singleton(a), 1, s_.norm, s_.estimator);
    return b;
  }

  void link(std::string label, const RadiusBracket& b, Relation rel) {
    report_.links.push_back({std::move(label), b, rel});
  }
  void skip(std::string label, std::string reason) {
    report_.skipped.push_back({std::move(label), "skipped: hypothesis " + std::move(reason)});
  }
  void note(std::string n) { report_.notes.push_back(std::move(n)); }

  ChainReport finish() {
    if (!report_.links.empty()) report_.links.back().relation_to_next = Relation::End;
    evaluate_chain(report_);
    return std::move(report_);
  }

 private:
  ChainSettings s_;
  ChainReport report_;
};

}  // namespace

std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::ZhanChain: return "zhan-chain";
    case TheoremId::Powers: return "powers";
    case TheoremId::Refin: return "refin";
    case TheoremId::Folge: return "folge";
    case TheoremId::KathypropEq: return "kathyprop-eq";
    case TheoremId::KathypropMat: return "kathyprop-mat";
    case TheoremId::Finally: return "finally";
    case TheoremId::Kathyth1: return "kathyth1";
    case TheoremId::EqualitiesJoint: return "equalities-joint";
    case TheoremId::Kathyth2: return "kathyth2";
    case TheoremId::Finally2: return "finally2";
    case TheoremId::SymMono: return "sym-mono";
    case TheoremId::GeomSym: return "geom-sym";
    case TheoremId::SymMat: return "sym-mat";
    case TheoremId::GeomSymMat: return "geom-sym-mat";
  }
  return "?";
}

const std::vector<TheoremId>& all_theorems() {
  static const std::vector<TheoremId> ids = {
      TheoremId::ZhanChain,   TheoremId::Powers,       TheoremId::Refin,
      TheoremId::Folge,       TheoremId::KathypropEq,  TheoremId::KathypropMat,
      TheoremId::Finally,     TheoremId::Kathyth1,     TheoremId::EqualitiesJoint,
      TheoremId::Kathyth2,    TheoremId::Finally2,     TheoremId::SymMono,
      TheoremId::GeomSym,     TheoremId::SymMat,       TheoremId::GeomSymMat};
  return ids;
}

TheoremId parse_theorem_id(std::string_view s) {
  for (auto id : all_theorems())
    if (to_string(id) == s) return id;
  throw DomainError("unknown theorem id '" + std::string(s) + "'");
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "verified";
    case Verdict::Indeterminate: return "indeterminate";
    case Verdict::Violated: return "violated";
  }
  return "?";
}

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Le: return "<=";
    case Relation::Eq: return "=";
    case Relation::End: return "end";
  }
  return "?";
}

void evaluate_chain(ChainReport& report) {
  const auto& L = report.links;
  const double le_tol = report.settings.le_tol;
  const double eq_tol = report.settings.eq_tol;
  report.margins.clear();
  bool violated = false;
  bool indeterminate = false;

  std::size_t start = 0;
  while (start < L.size()) {
    std::size_t end = start;
    while (end + 1 < L.size() && L[end].relation_to_next != Relation::End) ++end;
    // Sub-chain is L[start..end].
    for (std::size_t i = start; i <= end; ++i) {
      bool eq_run = true;
      for (std::size_t j = i + 1; j <= end; ++j) {
        eq_run = eq_run && L[j - 1].relation_to_next == Relation::Eq;
        const auto& bi = L[i].bracket;
        const auto& bj = L[j].bracket;
        if (bi.lo > bj.hi + le_tol * std::max(1.0, bj.hi)) violated = true;
        if (eq_run && bj.lo > bi.hi + le_tol * std::max(1.0, bi.hi)) violated = true;
      }
      if (i == end) break;
      const auto& bi = L[i].bracket;
      const auto& bn = L[i + 1].bracket;
      if (L[i].relation_to_next == Relation::Eq) {
        report.margins.push_back(std::min(bi.hi, bn.hi) - std::max(bi.lo, bn.lo));
        const double hi = std::max(bi.hi, bn.hi);
        if (hi - std::min(bi.lo, bn.lo) > eq_tol * std::max(1.0, hi)) indeterminate = true;
      } else {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t j = i + 1; j <= end; ++j) m = std::min(m, L[j].bracket.hi - bi.lo);
        report.margins.push_back(m);
      }
    }
    start = end + 1;
  }
  report.verdict = violated        ? Verdict::Violated
                   : indeterminate ? Verdict::Indeterminate
                                   : Verdict::Verified;
}

// ------------------------------------------------------------------ chains

ChainReport chain_zhan(const NonnegMatrix& a, const NonnegMatrix& b, double beta,
                       const ChainSettings& settings) {
  if (a.dim() != b.dim()) throw DimensionError("chain_zhan: dimension mismatch");
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("chain_zhan: beta must lie in [0, 1]");
  Builder c("zhan-chain", settings);
  const auto ab = matrix_product(a, b);
  const auto ba = matrix_product(b, a);
  const auto r_had = c.rho(hadamard_product(a, b));
  const auto r_sq = c.rho(matrix_product(hadamard_product(a, a), hadamard_product(b, b)));
  const auto r_abab = c.rho(hadamard_product(ab, ab));
  const auto r_baba = c.rho(hadamard_product(ba, ba));
  const auto r_ab = c.rho(ab);

  c.link("ρ(A∘B)", r_had, Relation::Le);
  c.link("ρ((A∘A)(B∘B))^(1/2)", raise(r_sq, 0.5), Relation::Le);
  c.link("ρ(AB∘AB)^(" + num(beta / 2) + ")·ρ(BA∘BA)^(" + num((1 - beta) / 2) + ")",
         raise(r_abab, beta / 2) * raise(r_baba, (1 - beta) / 2), Relation::Le);
  c.link("ρ(AB)", r_ab, Relation::End);

  c.link("ρ(A∘B)", r_had, Relation::Le);
  c.link("ρ(AB∘BA)^(1/2)", raise(c.rho(hadamard_product(ab, ba)), 0.5), Relation::Le);
  c.link("ρ(AB∘AB)^(1/4)·ρ(BA∘BA)^(1/4)", raise(r_abab, 0.25) * raise(r_baba, 0.25),
         Relation::Le);
  c.link("ρ(AB)", r_ab, Relation::End);
  return c.finish();
}

ChainReport chain_huang(std::span<const NonnegMatrix> mats, const ChainSettings& settings) {
  if (mats.empty()) throw DimensionError("chain_huang: no matrices");
  for (const auto& a : mats)
    if (a.dim() != mats[0].dim()) throw DimensionError("chain_huang: dimension mismatch");
  Builder c("huang", settings);
  const std::size_t m = mats.size();
  const double inv = 1.0 / static_cast<double>(m);
  const std::vector<double> w(m, inv);

  std::vector<NonnegMatrix> cyc;
  for (std::size_t j = 0; j < m; ++j) {
    NonnegMatrix p = mats[j];
    for (std::size_t k = 1; k < m; ++k) p = matrix_product(p, mats[(j + k) % m]);
    cyc.push_back(std::move(p));
  }
  c.link("ρ(A_1^(1/m)∘⋯∘A_m^(1/m))", c.rho(weighted_hadamard_geometric_mean(mats, w)),
         Relation::Le);
  c.link("ρ(P_1^(1/m)∘⋯∘P_m^(1/m))^(1/m)",
         raise(c.rho(weighted_hadamard_geometric_mean(cyc, w)), inv), Relation::Le);
  c.link("ρ(A_1⋯A_m)^(1/m)", raise(c.rho(cyc[0]), inv), Relation::End);
  return c.finish();
}

ChainReport chain_powers(const std::vector<MatrixSet>& sets, const WeightVector& w, int n,
                         const ChainSettings& settings) {
  require_sets(sets, "chain_powers");
  require_n(n, "chain_powers");
  if (w.size() != sets.size()) throw DimensionError("chain_powers: weight count mismatch");
  if (w.regime() != WeightVector::Regime::Convex)
    throw DomainError("chain_powers: weights must be convex");
  Builder c("powers", settings);
  const std::size_t m = sets.size();
  const auto cap = c.cap();

  c.link("r(Ψ_1^(α_1)∘⋯∘Ψ_m^(α_m))", c.r(hmean_same(sets, w.values(), cap)), Relation::Le);
  c.link("r((Ψ_1^" + std::to_string(n) + ")^(α_1)∘⋯)^(1/" + std::to_string(n) + ")",
         raise(c.r(hmean_same(powers_of(sets, n, cap), w.values(), cap)), 1.0 / n),
         Relation::Le);
  RadiusBracket prod{1.0, 1.0, settings.depth, settings.norm};
  for (std::size_t i = 0; i < m; ++i) prod = prod * raise(c.r(sets[i]), w[i]);
  c.link("r(Ψ_1)^(α_1)⋯r(Ψ_m)^(α_m)", prod, Relation::End);

  const double inv = 1.0 / static_cast<double>(m);
  c.link("r(Ψ_1^(1/m)∘⋯∘Ψ_m^(1/m))",
         c.r(hmean_same(sets, std::vector<double>(m, inv), cap)), Relation::Le);
  c.link("r(Ψ_1⋯Ψ_m)^(1/m)", raise(c.r(set_product(sets, cap)), inv), Relation::End);
  return c.finish();
}

ChainReport chain_folge(const std::vector<MatrixSet>& sets, const WeightVector& w, double t, int n,
                        const ChainSettings& settings) {
  require_sets(sets, "chain_folge");
  require_n(n, "chain_folge");
  if (w.size() != sets.size()) throw DimensionError("chain_folge: weight count mismatch");
  Builder c("folge", settings);
  const std::size_t m = sets.size();
  const auto cap = c.cap();

  c.link("r(Ψ_1^(α_1)∘⋯∘Ψ_m^(α_m))", c.r(hmean_same(sets, w.values(), cap)), Relation::Le);
  c.link("r((Ψ_1^" + std::to_string(n) + ")^(α_1)∘⋯)^(1/" + std::to_string(n) + ")",
         raise(c.r(hmean_same(powers_of(sets, n, cap), w.values(), cap)), 1.0 / n),
         Relation::Le);
  RadiusBracket prod{1.0, 1.0, settings.depth, settings.norm};
  for (std::size_t i = 0; i < m; ++i) prod = prod * raise(c.r(sets[i]), w[i]);
  c.link("r(Ψ_1)^(α_1)⋯r(Ψ_m)^(α_m)", prod, Relation::End);

  const std::string ts = num(t);
  if (t >= 1.0) {
    const auto& psi = sets.front();
    c.link("r(Ψ^(" + ts + "))", c.r(set_hadamard_power(psi, t)), Relation::Le);
    c.link("r((Ψ^" + std::to_string(n) + ")^(" + ts + "))^(1/" + std::to_string(n) + ")",
           raise(c.r(set_hadamard_power(set_power(psi, n, cap), t)), 1.0 / n), Relation::Le);
    c.link("r(Ψ)^" + ts, raise(c.r(psi), t), Relation::End);
  } else {
    c.skip("r(Ψ^(t)) <= r(Ψ)^t", "t >= 1 not met (t = " + ts + ")");
  }
  return c.finish();
}

ChainReport chain_refin(const MatrixSet& psi, const MatrixSet& sigma, double beta,
                        const ChainSettings& settings) {
  if (psi.dim() != sigma.dim()) throw DimensionError("chain_refin: dimension mismatch");
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("chain_refin: beta must lie in [0, 1]");
  Builder c("refin", settings);
  const auto cap = c.cap();
  const auto ps = set_product(psi, sigma, cap);
  const auto sp = set_product(sigma, psi, cap);

  const auto h = c.r(hmean({{&psi, 0.5}, {&sigma, 0.5}}, cap));
  const auto a = c.r(hmean({{&ps, 0.5}, {&ps, 0.5}}, cap));
  const auto b = c.r(hmean({{&sp, 0.5}, {&sp, 0.5}}, cap));
  const auto z = raise(c.r(ps), 0.5);

  c.link("r(Ψ^(1/2)∘Σ^(1/2))", h, Relation::Le);
  c.link("r((ΨΣ)^(1/2)∘(ΣΨ)^(1/2))^(1/2)", raise(c.r(hmean({{&ps, 0.5}, {&sp, 0.5}}, cap)), 0.5),
         Relation::Le);
  c.link("r((ΨΣ)^(1/2)∘(ΨΣ)^(1/2))^(1/4)·r((ΣΨ)^(1/2)∘(ΣΨ)^(1/2))^(1/4)",
         raise(a, 0.25) * raise(b, 0.25), Relation::Eq);
  c.link("r(ΨΣ)^(1/2)", z, Relation::End);

  const auto pp = hmean({{&psi, 0.5}, {&psi, 0.5}}, cap);
  const auto ss = hmean({{&sigma, 0.5}, {&sigma, 0.5}}, cap);
  c.link("r(Ψ^(1/2)∘Σ^(1/2))", h, Relation::Le);
  c.link("r((Ψ^(1/2)∘Ψ^(1/2))(Σ^(1/2)∘Σ^(1/2)))^(1/2)", raise(c.r(set_product(pp, ss, cap)), 0.5),
         Relation::Eq);
  c.link("r((ΨΣ)^(1/2)∘(ΨΣ)^(1/2))^(" + num(beta / 2) + ")·r((ΣΨ)^(1/2)∘(ΣΨ)^(1/2))^(" +
             num((1 - beta) / 2) + ")",
         raise(a, beta / 2) * raise(b, (1 - beta) / 2), Relation::Eq);
  c.link("r(ΨΣ)^(1/2)", z, Relation::End);
  return c.finish();
}

ChainReport chain_kathyprop_eq(const MatrixSet& psi, const MatrixSet& sigma, const WeightVector& w,
                               double beta, const ChainSettings& settings) {
  if (psi.dim() != sigma.dim()) throw DimensionError("chain_kathyprop_eq: dimension mismatch");
  if (w.regime() != WeightVector::Regime::Convex)
    throw DomainError("chain_kathyprop_eq: weights must be convex");
  if (!(beta >= 0.0 && beta <= 1.0))
    throw DomainError("chain_kathyprop_eq: beta must lie in [0, 1]");
  Builder c("kathyprop-eq", settings);
  const auto cap = c.cap();

  std::vector<MatrixSet> copies(w.size(), psi);
  c.link("r(Ψ)", c.r(psi), Relation::Eq);
  c.link("r(Ψ^(α_1)∘⋯∘Ψ^(α_m))", c.r(hmean_same(copies, w.values(), cap)), Relation::End);

  const auto ps = set_product(psi, sigma, cap);
  const auto sp = set_product(sigma, psi, cap);
  const auto pp = hmean({{&psi, 0.5}, {&psi, 0.5}}, cap);
  const auto ss = hmean({{&sigma, 0.5}, {&sigma, 0.5}}, cap);
  const auto a = c.r(hmean({{&ps, 0.5}, {&ps, 0.5}}, cap));
  const auto b = c.r(hmean({{&sp, 0.5}, {&sp, 0.5}}, cap));
  c.link("r(ΨΣ)", c.r(ps), Relation::Eq);
  c.link("r((Ψ^(1/2)∘Ψ^(1/2))(Σ^(1/2)∘Σ^(1/2)))", c.r(set_product(pp, ss, cap)), Relation::Eq);
  c.link("r((ΨΣ)^(1/2)∘(ΨΣ)^(1/2))^(" + num(beta) + ")·r((ΣΨ)^(1/2)∘(ΣΨ)^(1/2))^(" +
             num(1 - beta) + ")",
         raise(a, beta) * raise(b, 1 - beta), Relation::End);
  return c.finish();
}

ChainReport chain_kathyprop_mat(const MatrixSet& psi, int m, double alpha, int n,
                                const ChainSettings& settings) {
  if (m < 1) throw DomainError("chain_kathyprop_mat: m must be >= 1");
  require_n(n, "chain_kathyprop_mat");
  if (!(alpha >= 1.0)) throw DomainError("chain_kathyprop_mat: alpha must be >= 1");
  Builder c("kathyprop-mat", settings);
  const auto cap = c.cap();
  const std::string ms = std::to_string(m), ns = std::to_string(n), as = num(alpha);
  const auto r_psi = c.r(psi);
  const auto psin = set_power(psi, n, cap);

  const std::vector<double> ones(static_cast<std::size_t>(m), 1.0);
  c.link("r(Ψ^(" + ms + "))", c.r(set_hadamard_power(psi, m)), Relation::Le);
  c.link("r(Ψ∘⋯∘Ψ) [" + ms + " factors]",
         c.r(hmean_same(std::vector<MatrixSet>(ones.size(), psi), ones, cap)), Relation::Le);
  c.link("r(Ψ^" + ns + "∘⋯∘Ψ^" + ns + ")^(1/" + ns + ")",
         raise(c.r(hmean_same(std::vector<MatrixSet>(ones.size(), psin), ones, cap)), 1.0 / n),
         Relation::Le);
  c.link("r(Ψ)^" + ms, raise(r_psi, m), Relation::End);

  c.link("r(Ψ^(" + as + "))", c.r(set_hadamard_power(psi, alpha)), Relation::Le);
  c.link("r(Ψ^(" + num(alpha - 1) + ")∘Ψ)", c.r(hmean({{&psi, alpha - 1}, {&psi, 1.0}}, cap)),
         Relation::Le);
  c.link("r((Ψ^" + ns + ")^(" + num(alpha - 1) + ")∘Ψ^" + ns + ")^(1/" + ns + ")",
         raise(c.r(hmean({{&psin, alpha - 1}, {&psin, 1.0}}, cap)), 1.0 / n), Relation::Le);
  c.link("r(Ψ)^" + as, raise(r_psi, alpha), Relation::End);
  return c.finish();
}

namespace {

void check_grid(const SetGrid& grid, const WeightVector& w, WeightMode mode, const char* op) {
  if (grid.empty() || grid.front().empty()) throw DimensionError(std::string(op) + ": empty grid");
  for (const auto& row : grid) {
    if (row.size() != grid.front().size())
      throw DimensionError(std::string(op) + ": ragged grid");
    require_sets(row, op);
    if (row.front().dim() != grid.front().front().dim())
      throw DimensionError(std::string(op) + ": dimension mismatch");
  }
  if (w.size() != grid.front().size())
    throw DimensionError(std::string(op) + ": weight count must equal the column count");
  if (mode == WeightMode::Kernel && w.regime() != WeightVector::Regime::Convex)
    throw DomainError(std::string(op) + ": kernel mode needs convex weights");
}

template <class Combine>
ChainReport grid_chain(const char* id, const SetGrid& grid, const WeightVector& w, int n,
                       WeightMode mode, const ChainSettings& settings, Combine combine,
                       const std::string& sym) {
  check_grid(grid, w, mode, id);
  require_n(n, id);
  Builder c(id, settings);
  const auto cap = c.cap();
  const std::size_t k = grid.size(), m = grid.front().size();

  std::vector<MatrixSet> row_means;
  for (const auto& row : grid) row_means.push_back(hmean_same(row, w.values(), cap));
  std::vector<MatrixSet> cols;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<MatrixSet> col;
    for (std::size_t i = 0; i < k; ++i) col.push_back(grid[i][j]);
    cols.push_back(combine(col, cap));
  }
  const std::string ns = std::to_string(n);
  c.link("r(" + sym + "_i (Ψ_i1^(α_1)∘⋯∘Ψ_im^(α_m)))", c.r(combine(row_means, cap)),
         Relation::Le);
  c.link("r((" + sym + "_i Ψ_i1)^(α_1)∘⋯)", c.r(hmean_same(cols, w.values(), cap)), Relation::Le);
  c.link("r(((" + sym + "_i Ψ_i1)^" + ns + ")^(α_1)∘⋯)^(1/" + ns + ")",
         raise(c.r(hmean_same(powers_of(cols, n, cap), w.values(), cap)), 1.0 / n),
         Relation::Le);
  RadiusBracket prod{1.0, 1.0, settings.depth, settings.norm};
  for (std::size_t j = 0; j < m; ++j) prod = prod * raise(c.r(cols[j]), w[j]);
  c.link("r(" + sym + "_i Ψ_i1)^(α_1)⋯", prod, Relation::End);
  return c.finish();
}

}  // namespace

ChainReport chain_finally(const SetGrid& grid, const WeightVector& w, int n, WeightMode mode,
                          const ChainSettings& settings) {
  return grid_chain(
      "finally", grid, w, n, mode, settings,
      [](const std::vector<MatrixSet>& v, std::size_t cap) { return set_product(v, cap); }, "Π");
}

ChainReport chain_finally2(const SetGrid& grid, const WeightVector& w, int n, WeightMode mode,
                           const ChainSettings& settings) {
  return grid_chain(
      "finally2", grid, w, n, mode, settings,
      [](const std::vector<MatrixSet>& v, std::size_t cap) { return set_sum(v, cap); }, "Σ");
}

ChainReport chain_kathyth1(const std::vector<MatrixSet>& sets, int n,
                           const ChainSettings& settings) {
  require_sets(sets, "chain_kathyth1");
  require_n(n, "chain_kathyth1");
  Builder c("kathyth1", settings);
  const auto cap = c.cap();
  const std::size_t m = sets.size();
  const double inv = 1.0 / static_cast<double>(m);
  const std::vector<double> w(m, inv);
  const auto phi = cyclic_all(sets, cap);
  const std::string ns = std::to_string(n);

  c.link("r(Ψ_1^(1/m)∘⋯∘Ψ_m^(1/m))", c.r(hmean_same(sets, w, cap)), Relation::Le);
  c.link("r(Φ_1^(1/m)∘⋯∘Φ_m^(1/m))^(1/m)", raise(c.r(hmean_same(phi, w, cap)), inv),
         Relation::Le);
  c.link("r((Φ_1^" + ns + ")^(1/m)∘⋯)^(1/(" + ns + "m))",
         raise(c.r(hmean_same(powers_of(phi, n, cap), w, cap)), inv / n), Relation::Le);
  c.link("r(Ψ_1⋯Ψ_m)^(1/m)", raise(c.r(phi[0]), inv), Relation::End);
  return c.finish();
}

ChainReport chain_equalities_joint(const std::vector<MatrixSet>& sets, const WeightVector& w,
                                   double beta, const ChainSettings& settings) {
  require_sets(sets, "chain_equalities_joint");
  if (w.size() != sets.size()) throw DimensionError("chain_equalities_joint: weight count mismatch");
  if (w.regime() != WeightVector::Regime::Convex)
    throw DomainError("chain_equalities_joint: weights must be convex");
  if (!(beta >= 0.0 && beta <= 1.0))
    throw DomainError("chain_equalities_joint: beta must lie in [0, 1]");
  Builder c("equalities-joint", settings);
  const auto cap = c.cap();
  const std::size_t m = sets.size();
  const auto phi = cyclic_all(sets, cap);

  std::vector<MatrixSet> split;
  for (const auto& s : sets) split.push_back(hmean({{&s, beta}, {&s, 1 - beta}}, cap));
  RadiusBracket prod{1.0, 1.0, settings.depth, settings.norm};
  for (std::size_t j = 0; j < m; ++j)
    prod = prod * raise(c.r(hmean({{&phi[j], beta}, {&phi[j], 1 - beta}}, cap)), w[j]);

  const std::string bs = num(beta), cs = num(1 - beta);
  c.link("r(Ψ_1⋯Ψ_m)", c.r(phi[0]), Relation::Eq);
  c.link("r((Ψ_1^(" + bs + ")∘Ψ_1^(" + cs + "))⋯)", c.r(set_product(split, cap)), Relation::Eq);
  c.link("r(Φ_1^(" + bs + ")∘Φ_1^(" + cs + "))^(α_1)⋯", prod, Relation::End);
  return c.finish();
}

ChainReport chain_kathyth2(const std::vector<MatrixSet>& sets, double alpha, int n,
                           const ChainSettings& settings) {
  require_sets(sets, "chain_kathyth2");
  require_n(n, "chain_kathyth2");
  const std::size_t m = sets.size();
  const double md = static_cast<double>(m);
  if (!(alpha * md >= 1.0 - 1e-12)) throw DomainError("chain_kathyth2: alpha must be >= 1/m");
  Builder c("kathyth2", settings);
  const auto cap = c.cap();
  const double am = alpha * md;
  const std::string ns = std::to_string(n), as = num(alpha), ams = num(am);
  const std::vector<double> wa(m, alpha);

  const auto phi = cyclic_all(sets, cap);
  const auto phin = powers_of(phi, n, cap);
  const auto& p = phi[0];
  const auto pn = set_power(p, n, cap);

  const auto base = c.r(hmean_same(sets, wa, cap));
  const auto l2x = raise(c.r(hmean_same(phi, wa, cap)), 1.0 / md);
  const auto l3x = raise(c.r(hmean_same(phin, wa, cap)), 1.0 / (md * n));
  const auto top = raise(c.r(p), alpha);

  std::vector<MatrixSet> psi_am;
  for (const auto& s : sets) psi_am.push_back(am == 1.0 ? s : set_hadamard_power(s, am));
  const auto y1 = raise(c.r(set_product(psi_am, cap)), 1.0 / md);
  const auto y2 = raise(c.r(set_hadamard_power(p, am)), 1.0 / md);
  const auto y3 = raise(c.r(set_hadamard_power(pn, am)), 1.0 / (md * n));

  const std::string l_base = "r(Ψ_1^(" + as + ")∘⋯∘Ψ_m^(" + as + "))";
  const std::string l_top = "r(Ψ_1⋯Ψ_m)^" + as;
  const std::string l2 = "r(Φ_1^(" + as + ")∘⋯∘Φ_m^(" + as + "))^(1/m)";
  const std::string l3 = "r((Φ_1^" + ns + ")^(" + as + ")∘⋯)^(1/(m" + ns + "))";
  const std::string ly1 = "r(Ψ_1^(" + ams + ")⋯Ψ_m^(" + ams + "))^(1/m)";
  const std::string ly2 = "r((Ψ_1⋯Ψ_m)^(" + ams + "))^(1/m)";
  const std::string ly3 = "r(((Ψ_1⋯Ψ_m)^" + ns + ")^(" + ams + "))^(1/(m" + ns + "))";

  c.link(l_base, base, Relation::Le);
  c.link(l2, l2x, Relation::Le);
  c.link(l3, l3x, Relation::Le);
  c.link(l_top, top, Relation::End);

  c.link(l_base, base, Relation::Le);
  c.link(ly1, y1, Relation::Le);
  c.link(ly2, y2, Relation::Le);
  c.link(ly3, y3, Relation::Le);
  c.link(l_top, top, Relation::End);

  if (alpha >= 1.0) {
    RadiusBracket prod{1.0, 1.0, settings.depth, settings.norm};
    for (const auto& f : phin) prod = prod * c.r(set_hadamard_power(f, md));
    c.link(l_base, base, Relation::Le);
    c.link(l2, l2x, Relation::Le);
    c.link(l3, l3x, Relation::Le);
    c.link("(r((Φ_1^" + ns + ")^(m))⋯r((Φ_m^" + ns + ")^(m)))^(" + as + "/(m²" + ns + "))",
           raise(prod, alpha / (md * md * n)), Relation::Le);
    c.link(l_top, top, Relation::End);

    const auto sig = cyclic_all(psi_am, cap);
    const std::vector<double> wi(m, 1.0 / md);
    c.link(l_base, base, Relation::Le);
    c.link("r(Σ_1^(1/m)∘⋯∘Σ_m^(1/m))^(1/m)", raise(c.r(hmean_same(sig, wi, cap)), 1.0 / md),
           Relation::Le);
    c.link("r((Σ_1^" + ns + ")^(1/m)∘⋯)^(1/(m" + ns + "))",
           raise(c.r(hmean_same(powers_of(sig, n, cap), wi, cap)), 1.0 / (md * n)), Relation::Le);
    c.link(ly1, y1, Relation::Le);
    c.link(ly2, y2, Relation::Le);
    c.link(ly3, y3, Relation::Le);
    c.link(l_top, top, Relation::End);
  } else {
    c.skip("Hadamard power chain through (Φ_j^n)^(m)", "alpha >= 1 not met (alpha = " + as + ")");
    c.skip("cyclic chain through Σ_j", "alpha >= 1 not met (alpha = " + as + ")");
  }
  return c.finish();
}

ChainReport chain_geom_sym(const std::vector<MatrixSet>& sets, double alpha, int n,
                           const ChainSettings& settings,
                           std::optional<std::pair<double, double>> ab) {
  require_sets(sets, "chain_geom_sym");
  require_n(n, "chain_geom_sym");
  double a = alpha, b = 1.0 - alpha;
  if (ab) {
    a = ab->first;
    b = ab->second;
    if (!(a >= 0.0) || !(b >= 0.0) || a + b < 1.0 - 1e-12)
      throw DomainError("chain_geom_sym: need alpha, beta >= 0 and alpha + beta >= 1");
  } else if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("chain_geom_sym: alpha must lie in [0, 1]");
  }
  Builder c(ab ? "geom-sym-mat" : "geom-sym", settings);
  const auto cap = c.cap();
  const std::size_t m = sets.size();
  const std::string ns = std::to_string(n);
  const std::string S = ab ? "S_{" + num(a) + "," + num(b) + "}" : "S_" + num(a);

  std::vector<MatrixSet> sym;
  for (const auto& s : sets) sym.push_back(symmetrize_ab(s, a, b, cap));
  const auto p = set_product(sets, cap);
  std::vector<MatrixSet> rev(sets.rbegin(), sets.rend());
  const auto q = set_product(rev, cap);
  const auto qs = set_adjoint(q);
  const auto pn = set_power(p, n, cap);
  const auto qsn = set_power(qs, n, cap);
  const auto r_p = c.r(p);
  const auto r_q = c.r(q);
  const auto pq = raise(r_p, a) * raise(r_q, b);

  c.link("r(" + S + "(Ψ_1)⋯" + S + "(Ψ_m))", c.r(set_product(sym, cap)), Relation::Le);
  c.link("r(P^(" + num(a) + ")∘(Q*)^(" + num(b) + "))", c.r(hmean({{&p, a}, {&qs, b}}, cap)),
         Relation::Le);
  c.link("r((P^" + ns + ")^(" + num(a) + ")∘((Q*)^" + ns + ")^(" + num(b) + "))^(1/" + ns + ")",
         raise(c.r(hmean({{&pn, a}, {&qsn, b}}, cap)), 1.0 / n), Relation::Le);
  if (m == 2) {
    c.link("r(P)^" + num(a) + "·r(Q)^" + num(b), pq, Relation::Eq);
    c.link("r(Ψ_1Ψ_2)^" + num(a + b), raise(r_p, a + b), Relation::End);
  } else {
    c.link("r(P)^" + num(a) + "·r(Q)^" + num(b), pq, Relation::End);
  }

  const auto sum = set_sum(sets, cap);
  c.link("r(Σ_i " + S + "(Ψ_i))", c.r(set_sum(sym, cap)), Relation::Le);
  c.link("r(" + S + "(Σ_i Ψ_i))", c.r(symmetrize_ab(sum, a, b, cap)), Relation::Le);
  c.link("r(" + S + "((Σ_i Ψ_i)^" + ns + "))^(1/" + ns + ")",
         raise(c.r(symmetrize_ab(set_power(sum, n, cap), a, b, cap)), 1.0 / n), Relation::Le);
  c.link("r(Σ_i Ψ_i)^" + num(a + b), raise(c.r(sum), a + b), Relation::End);

  const auto& psi = sets.front();
  c.link("r(" + S + "(Ψ_1))", c.r(sym.front()), Relation::Le);
  c.link("r(" + S + "(Ψ_1^" + ns + "))^(1/" + ns + ")",
         raise(c.r(symmetrize_ab(set_power(psi, n, cap), a, b, cap)), 1.0 / n), Relation::Le);
  c.link("r(Ψ_1)^" + num(a + b), raise(c.r(psi), a + b), Relation::End);
  return c.finish();
}

namespace {

ChainReport sequence_chain(const char* id, const SymmetrizationSequence& seq,
                           const std::string& target_label, const ChainSettings& settings) {
  Builder c(id, settings);
  for (const auto& lvl : seq.levels) {
    const std::string label =
        lvl.n == 0 ? "r_0" : "r_" + std::to_string(lvl.n) + " = r(S(Ψ^" +
                                 std::to_string(1 << lvl.n) + "))^(1/" +
                                 std::to_string(1 << lvl.n) + ")";
    c.link(label, lvl.r, Relation::Le);
  }
  c.link(target_label, seq.target, Relation::End);
  c.note("uniform depth " + std::to_string(seq.depth) + " across levels");
  return c.finish();
}

EstimatorOptions sequence_options(const ChainSettings& s) { return s.estimator; }

}  // namespace

ChainReport chain_sym_mono(const MatrixSet& psi, double alpha, int levels,
                           const ChainSettings& settings) {
  const auto seq = symmetrization_sequence(psi, alpha, levels, settings.depth, settings.norm,
                                           sequence_options(settings));
  return sequence_chain("sym-mono", seq, "r(Ψ)", settings);
}

ChainReport chain_sym_mat(const MatrixSet& psi, double alpha, double beta, int levels,
                          const ChainSettings& settings) {
  const auto seq = symmetrization_sequence_ab(psi, alpha, beta, levels, settings.depth,
                                              settings.norm, sequence_options(settings));
  return sequence_chain("sym-mat", seq, "r(Ψ)^" + num(alpha + beta), settings);
}

bool scalar_mitr_check(const std::vector<std::vector<Eigen::VectorXd>>& f,
                       std::span<const double> exponents) {
  if (f.empty()) throw DimensionError("scalar_mitr_check: no rows");
  const std::size_t m = exponents.size();
  double total = 0.0;
  for (double a : exponents) {
    if (!(a >= 0.0)) throw DomainError("scalar_mitr_check: exponents must be nonnegative");
    total += a;
  }
  if (total < 1.0 - 1e-12) throw DomainError("scalar_mitr_check: exponents must sum to >= 1");
  const Eigen::Index len = f.front().empty() ? 0 : f.front().front().size();
  for (const auto& row : f) {
    if (row.size() != m) throw DimensionError("scalar_mitr_check: row length != exponent count");
    for (const auto& v : row) {
      if (v.size() != len) throw DimensionError("scalar_mitr_check: vector length mismatch");
      if ((v.array() < 0.0).any()) throw DomainError("scalar_mitr_check: negative entry");
    }
  }
  for (Eigen::Index t = 0; t < len; ++t) {
    double lhs = 0.0;
    for (const auto& row : f) {
      double p = 1.0;
      for (std::size_t j = 0; j < m; ++j) p *= std::pow(row[j](t), exponents[j]);
      lhs += p;
    }
    double rhs = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (const auto& row : f) s += row[j](t);
      rhs *= std::pow(s, exponents[j]);
    }
    if (lhs > rhs * (1.0 + 1e-12) + 1e-300) return false;
  }
  return true;
}

}  // namespace jsr
