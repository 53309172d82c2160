#include "jsr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace jsr {

namespace {

std::vector<NonnegMatrix> flatten(const std::vector<MatrixSet>& sets) {
  std::vector<NonnegMatrix> out;
  for (const auto& s : sets)
    for (const auto& a : s) out.push_back(a);
  return out;
}

const MatrixSet& second_or_first(const std::vector<MatrixSet>& sets) {
  return sets.size() > 1 ? sets[1] : sets[0];
}

WeightVector weights_or_uniform(const TheoremParams& p, std::size_t m) {
  return p.weights ? make_weights(*p.weights) : WeightVector::uniform(m);
}

ChainReport run_grid(TheoremId id, const std::vector<MatrixSet>& sets, const TheoremParams& p,
                     const ChainSettings& settings) {
  const std::size_t cols = p.weights ? p.weights->size() : std::min<std::size_t>(2, sets.size());
  if (cols == 0 || sets.size() < cols)
    throw DimensionError("grid needs at least as many sets as weights (" + std::to_string(cols) +
                         ")");
  const std::size_t rows = sets.size() / cols;
  SetGrid grid(rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) grid[i].push_back(sets[i * cols + j]);
  const auto w = weights_or_uniform(p, cols);
  const auto mode = w.regime() == WeightVector::Regime::Convex ? WeightMode::Kernel
                                                               : WeightMode::Matrix;
  auto r = id == TheoremId::Finally ? chain_finally(grid, w, p.n, mode, settings)
                                    : chain_finally2(grid, w, p.n, mode, settings);
  r.notes.push_back("grid " + std::to_string(rows) + "x" + std::to_string(cols) +
                    (mode == WeightMode::Kernel ? ", kernel mode" : ", matrix mode"));
  if (rows * cols < sets.size())
    r.notes.push_back(std::to_string(sets.size() - rows * cols) + " trailing set(s) unused");
  return r;
}

}  // namespace

WeightVector make_weights(const std::vector<double>& w) {
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  return std::abs(s - 1.0) <= 1e-12 ? WeightVector::convex(w) : WeightVector::super(w);
}

ChainReport run_theorem(TheoremId id, const std::vector<MatrixSet>& sets, const TheoremParams& p,
                        const ChainSettings& settings) {
  if (sets.empty()) throw DimensionError("instance has no sets");
  const std::size_t m = sets.size();
  switch (id) {
    case TheoremId::ZhanChain: {
      const auto mats = flatten(sets);
      auto r = chain_zhan(mats[0], mats[mats.size() > 1 ? 1 : 0], p.beta, settings);
      if (mats.size() == 1) r.notes.push_back("single matrix: B = A");
      const auto h = chain_huang(mats, settings);
      r.links.insert(r.links.end(), h.links.begin(), h.links.end());
      evaluate_chain(r);
      return r;
    }
    case TheoremId::Powers:
      return chain_powers(sets, weights_or_uniform(p, m), p.n, settings);
    case TheoremId::Refin:
      return chain_refin(sets[0], second_or_first(sets), p.beta, settings);
    case TheoremId::Folge:
      return chain_folge(sets, weights_or_uniform(p, m), p.alpha.value_or(2.0), p.n, settings);
    case TheoremId::KathypropEq:
      return chain_kathyprop_eq(sets[0], second_or_first(sets), weights_or_uniform(p, 2), p.beta,
                                settings);
    case TheoremId::KathypropMat:
      return chain_kathyprop_mat(sets[0], static_cast<int>(std::max<std::size_t>(2, m)),
                                 p.alpha.value_or(2.0), p.n, settings);
    case TheoremId::Finally:
    case TheoremId::Finally2:
      return run_grid(id, sets, p, settings);
    case TheoremId::Kathyth1:
      return chain_kathyth1(sets, p.n, settings);
    case TheoremId::EqualitiesJoint:
      return chain_equalities_joint(sets, weights_or_uniform(p, m), p.beta, settings);
    case TheoremId::Kathyth2:
      return chain_kathyth2(sets, p.alpha.value_or(1.0), p.n, settings);
    case TheoremId::SymMono:
      return chain_sym_mono(sets[0], p.alpha.value_or(0.5), p.levels, settings);
    case TheoremId::GeomSym:
      return chain_geom_sym(sets, p.alpha.value_or(0.5), p.n, settings);
    case TheoremId::SymMat:
      return chain_sym_mat(sets[0], p.alpha.value_or(1.0), p.alpha2.value_or(1.0), p.levels,
                           settings);
    case TheoremId::GeomSymMat:
      return chain_geom_sym(sets, p.alpha.value_or(1.0), p.n, settings,
                            std::pair{p.alpha.value_or(1.0), p.alpha2.value_or(1.0)});
  }
  throw DomainError("unhandled theorem id");
}

GeneratorParams batch_params(std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0xD1B54A32D192ED03ULL);
  GeneratorParams p;
  p.dim = rng.uniform_int(2, 4);
  p.set_count = static_cast<std::size_t>(rng.uniform_int(1, 3));
  p.set_size = static_cast<std::size_t>(rng.uniform_int(1, 3));
  p.density = 0.3 + 0.7 * rng.uniform();
  if (p.density > 1.0) p.density = 1.0;
  p.entry_scale = 1.0;
  p.seed = seed;
  return p;
}

std::vector<std::pair<std::string, TheoremParams>> batch_variants(TheoremId id, std::size_t m) {
  std::vector<std::pair<std::string, TheoremParams>> v;
  auto add = [&](std::string name, TheoremParams p) { v.emplace_back(std::move(name), p); };
  TheoremParams d;
  switch (id) {
    case TheoremId::ZhanChain:
    case TheoremId::Refin:
    case TheoremId::KathypropEq:
    case TheoremId::EqualitiesJoint: {
      TheoremParams p = d;
      p.beta = 0.3;
      add("beta=0.3", p);
      break;
    }
    case TheoremId::Folge: {
      TheoremParams p = d;
      p.weights = std::vector<double>(m, 1.0);
      p.alpha = 2.0;
      add("w=1,t=2", p);
      break;
    }
    case TheoremId::KathypropMat: {
      TheoremParams p = d;
      p.alpha = 1.0;
      add("alpha=1", p);
      p.alpha = 2.5;
      add("alpha=2.5", p);
      break;
    }
    case TheoremId::Finally:
    case TheoremId::Finally2: {
      add("uniform", d);
      if (m >= 2) {
        TheoremParams p = d;
        p.weights = std::vector<double>{1.0, 0.5};
        add("w=1,0.5", p);
      }
      break;
    }
    case TheoremId::Kathyth2: {
      for (double a : {1.0 / static_cast<double>(m), 1.0, 2.0}) {
        if (m == 1 && a == 1.0 && !v.empty()) continue;
        TheoremParams p = d;
        p.alpha = a;
        char buf[32];
        std::snprintf(buf, sizeof buf, "alpha=%g", a);
        add(buf, p);
      }
      break;
    }
    case TheoremId::GeomSym: {
      TheoremParams p = d;
      p.alpha = 0.3;
      add("alpha=0.3", p);
      break;
    }
    case TheoremId::SymMono: {
      TheoremParams p = d;
      p.alpha = 0.3;
      add("alpha=0.3", p);
      break;
    }
    case TheoremId::SymMat:
    case TheoremId::GeomSymMat: {
      TheoremParams p = d;
      p.alpha = 1.0;
      p.alpha2 = 1.0;
      add("ab=1,1", p);
      p.alpha = 0.7;
      p.alpha2 = 0.5;
      add("ab=0.7,0.5", p);
      break;
    }
    default:
      add("default", d);
  }
  return v;
}

BatchSummary verify_batch(const BatchOptions& opts) {
  BatchSummary out;
  const auto& ids = opts.theorems.empty() ? all_theorems() : opts.theorems;
  for (std::uint64_t seed = opts.seed_first; seed <= opts.seed_last; ++seed) {
    const auto params = batch_params(seed);
    const auto sets = generate_instance(params);
    ChainSettings settings = opts.settings;
    settings.seed = seed;
    for (auto id : ids) {
      auto& tally = out.per_theorem[std::string(to_string(id))];
      for (const auto& [name, tp] : batch_variants(id, sets.size())) {
        ++out.runs;
        bool shrunk = false;
        const auto report = with_shrinking(
            sets, [&](const std::vector<MatrixSet>& s) { return run_theorem(id, s, tp, settings); },
            &shrunk);
        if (!report) {
          ++tally.capped;
          continue;
        }
        if (shrunk) ++tally.shrunk;
        switch (report->verdict) {
          case Verdict::Verified: ++tally.verified; break;
          case Verdict::Indeterminate: ++tally.indeterminate; break;
          case Verdict::Violated:
            ++tally.violated;
            out.violations.push_back("seed " + std::to_string(seed) + " theorem " +
                                     std::string(to_string(id)) + " variant " + name);
            break;
        }
      }
    }
    if (seed == opts.seed_last) break;  // seed_last may be UINT64_MAX
  }
  return out;
}

std::string format_summary(const BatchSummary& s, const BatchOptions& opts) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "# seeds %llu..%llu depth %d norm %s\n",
                static_cast<unsigned long long>(opts.seed_first),
                static_cast<unsigned long long>(opts.seed_last), opts.settings.depth,
                std::string(to_string(opts.settings.norm)).c_str());
  out += buf;
  out += "theorem,verified,indeterminate,violated,capped,shrunk\n";
  std::size_t v = 0, i = 0, x = 0, c = 0, k = 0;
  for (auto id : all_theorems()) {
    const auto it = s.per_theorem.find(std::string(to_string(id)));
    if (it == s.per_theorem.end()) continue;
    const auto& t = it->second;
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%zu,%zu,%zu\n", it->first.c_str(), t.verified,
                  t.indeterminate, t.violated, t.capped, t.shrunk);
    out += buf;
    v += t.verified;
    i += t.indeterminate;
    x += t.violated;
    c += t.capped;
    k += t.shrunk;
  }
  std::snprintf(buf, sizeof buf, "total,%zu,%zu,%zu,%zu,%zu\n", v, i, x, c, k);
  out += buf;
  for (const auto& line : s.violations) out += "violated: " + line + "\n";
  return out;
}

}  // namespace jsr
