#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jsr/chains.hpp"
#include "jsr/io.hpp"

namespace jsr {

/// Theorem parameters as they come off the command line. Unset fields take
/// per-theorem defaults (see run_theorem).
struct TheoremParams {
  std::optional<std::vector<double>> weights;
  std::optional<double> alpha;
  std::optional<double> alpha2;
  double beta = 0.5;
  int n = 2;
  int levels = 3;
};

/// Weights summing to 1 (within 1e-12) are convex, otherwise super.
WeightVector make_weights(const std::vector<double>& w);

/// Binds a theorem's parameter schema to the sets of one instance.
///   zhan-chain       first two matrices (flattened over sets), then all of
///                    them for the cyclic-product chain
///   powers           all sets; weights convex, default uniform
///   refin            Psi = set 1, Sigma = set 2 (or set 1 again)
///   folge            all sets, weights (default uniform); t = alpha (2)
///   kathyprop-eq     Psi, Sigma as refin; weights default uniform over 2
///   kathyprop-mat    Psi = set 1, m = max(2, #sets), alpha (default 2)
///   finally(2)       grid of #weights columns (default 2), row-major;
///                    kernel mode for convex weights, matrix mode otherwise
///   kathyth1         all sets
///   equalities-joint all sets; weights convex, default uniform
///   kathyth2         all sets; alpha (default 1)
///   sym-mono         Psi = set 1; alpha (0.5); levels
///   geom-sym         all sets; alpha (0.5)
///   sym-mat          Psi = set 1; (alpha, alpha2) default (1, 1)
///   geom-sym-mat     all sets; (alpha, alpha2) default (1, 1)
ChainReport run_theorem(TheoremId id, const std::vector<MatrixSet>& sets, const TheoremParams& p,
                        const ChainSettings& settings);

struct BatchOptions {
  std::uint64_t seed_first = 0;
  std::uint64_t seed_last = 9;
  ChainSettings settings{6};
  /// Theorems to run; empty means all.
  std::vector<TheoremId> theorems;
};

struct TheoremTally {
  std::size_t verified = 0;
  std::size_t indeterminate = 0;
  std::size_t violated = 0;
  /// Runs that still exceeded a cap after shrinking to singletons.
  std::size_t capped = 0;
  /// Runs that succeeded only after dropping members.
  std::size_t shrunk = 0;
};

struct BatchSummary {
  std::map<std::string, TheoremTally> per_theorem;
  /// "seed S theorem T variant V" for each violated run.
  std::vector<std::string> violations;
  std::size_t runs = 0;
  bool any_violated() const { return !violations.empty(); }
};

/// Instance parameters for a batch seed: dim 2..4, 1..3 sets of 1..3
/// members, density in [0.3, 1], entry scale 1.
GeneratorParams batch_params(std::uint64_t seed);

/// The parameter variants exercised per theorem for an instance with m sets.
std::vector<std::pair<std::string, TheoremParams>> batch_variants(TheoremId id, std::size_t m);

/// Runs `fn(sets)`; on CapExceeded drops the last member of the largest set
/// and retries. Returns nullopt when even singletons exceed the cap.
template <class Fn>
auto with_shrinking(std::vector<MatrixSet> sets, Fn fn, bool* shrunk = nullptr)
    -> std::optional<decltype(fn(sets))>;

BatchSummary verify_batch(const BatchOptions& opts);
std::string format_summary(const BatchSummary& s, const BatchOptions& opts);

// ---------------------------------------------------------------------------

template <class Fn>
auto with_shrinking(std::vector<MatrixSet> sets, Fn fn, bool* shrunk)
    -> std::optional<decltype(fn(sets))> {
  if (shrunk) *shrunk = false;
  for (;;) {
    try {
      return fn(sets);
    } catch (const CapExceeded&) {
      std::size_t big = 0;
      for (std::size_t i = 1; i < sets.size(); ++i)
        if (sets[i].size() > sets[big].size()) big = i;
      if (sets[big].size() <= 1) return std::nullopt;
      auto members = sets[big].members();
      members.pop_back();
      sets[big] = MatrixSet(std::move(members), sets[big].name());
      if (shrunk) *shrunk = true;
    }
  }
}

}  // namespace jsr
