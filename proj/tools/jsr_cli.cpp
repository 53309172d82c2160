// jsr: command-line driver for the radius brackets and theorem chains.
//
// Exit codes: 0 ok (verified or indeterminate), 1 usage or other error,
// 2 a chain was violated, 3 a cap was exceeded, 4 the instance did not parse.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "jsr/chains.hpp"
#include "jsr/io.hpp"
#include "jsr/radius.hpp"
#include "jsr/verify.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kViolated = 2, kCap = 3, kParse = 4 };

struct Common {
  int depth = -1;
  std::string norm = "inf";
  std::size_t word_cap = 50'000'000;
  std::size_t word_budget = 4096;
  std::size_t set_cap = jsr::kDefaultSetCap;
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--depth", c.depth, "word depth");
  app->add_option("--norm", c.norm, "induced norm for upper bounds")
      ->check(CLI::IsMember({"inf", "one", "two"}));
  app->add_option("--word-cap", c.word_cap, "maximum words per enumeration");
  app->add_option("--word-budget", c.word_budget,
                  "chains lower their depth to stay within this many words (0 = off)");
  app->add_option("--set-cap", c.set_cap, "maximum members of a constructed set");
  app->add_option("--out", c.out, "output file (default stdout)");
}

jsr::EstimatorOptions estimator(const Common& c, bool budgeted) {
  jsr::EstimatorOptions o;
  o.word_cap = c.word_cap;
  o.word_budget = budgeted ? c.word_budget : 0;
  o.set_cap = c.set_cap;
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw jsr::Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw jsr::Error("cannot write '" + c.out + "'");
  f << text;
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t used = 0;
  const auto v = std::stoull(s, &used);
  if (used != s.size()) throw jsr::Error("bad integer '" + s + "'");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified joint spectral radius brackets and Hadamard mean inequality chains"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "write a seeded random instance");
  Common gen_c;
  jsr::GeneratorParams gp;
  gen->add_option("--seed", gp.seed, "64-bit seed");
  gen->add_option("--dim", gp.dim, "matrix dimension")->check(CLI::PositiveNumber);
  gen->add_option("--sets", gp.set_count, "number of sets")->check(CLI::PositiveNumber);
  gen->add_option("--size", gp.set_size, "members per set")->check(CLI::PositiveNumber);
  gen->add_option("--density", gp.density, "probability of a nonzero entry");
  gen->add_option("--scale", gp.entry_scale, "entries are uniform in (0, scale]");
  gen->add_option("--out", gen_c.out, "output file (default stdout)");

  // radius
  auto* rad = app.add_subcommand("radius", "bracket and Gelfand CSV for one set");
  Common rad_c;
  std::string rad_file;
  std::size_t rad_set = 1;
  add_common(rad, rad_c);
  rad->add_option("instance", rad_file, "instance file")->required();
  rad->add_option("--set", rad_set, "1-based set index")->check(CLI::PositiveNumber);

  // chain
  auto* ch = app.add_subcommand("chain", "evaluate one theorem chain (JSON report)");
  Common ch_c;
  std::string ch_file, ch_theorem;
  std::string ch_weights;
  double ch_alpha = 0, ch_alpha2 = 0;
  jsr::TheoremParams tp;
  std::uint64_t ch_seed = 0;
  add_common(ch, ch_c);
  ch->add_option("instance", ch_file, "instance file")->required();
  ch->add_option("--theorem", ch_theorem, "theorem id")->required();
  ch->add_option("--weights", ch_weights, "comma-separated positive weights");
  ch->add_option("--beta", tp.beta, "beta parameter");
  auto* ch_alpha_opt = ch->add_option("--alpha", ch_alpha, "alpha (or t for folge)");
  auto* ch_alpha2_opt = ch->add_option("--alpha2", ch_alpha2, "second exponent beta of S_{a,b}");
  ch->add_option("--n", tp.n, "power n")->check(CLI::PositiveNumber);
  ch->add_option("--levels", tp.levels, "symmetrization levels")->check(CLI::NonNegativeNumber);
  auto* ch_seed_opt = ch->add_option("--seed", ch_seed, "seed recorded in the report");

  // symmetrize
  auto* sym = app.add_subcommand("symmetrize", "r_n table of the symmetrization sequence");
  Common sym_c;
  std::string sym_file;
  double sym_alpha = 0.5, sym_alpha2 = 0;
  int sym_levels = 3;
  std::size_t sym_set = 1;
  add_common(sym, sym_c);
  sym->add_option("instance", sym_file, "instance file")->required();
  sym->add_option("--alpha", sym_alpha, "alpha");
  auto* sym_alpha2_opt = sym->add_option("--alpha2", sym_alpha2, "beta; selects S_{alpha,beta}");
  sym->add_option("--levels", sym_levels, "n_max")->check(CLI::NonNegativeNumber);
  sym->add_option("--set", sym_set, "1-based set index")->check(CLI::PositiveNumber);

  // verify-all
  auto* va = app.add_subcommand("verify-all", "run every theorem on a seeded batch");
  Common va_c;
  std::string va_seeds = "0..9";
  add_common(va, va_c);
  va->add_option("--seeds", va_seeds, "seed range a..b");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      emit(gen_c, jsr::serialize_instance(jsr::generate_instance(gp), jsr::generator_metadata(gp)));
      return kOk;
    }

    if (*rad) {
      const auto sets = jsr::parse_instance(read_file(rad_file));
      if (rad_set > sets.size()) throw jsr::DomainError("--set out of range");
      const auto& s = sets[rad_set - 1];
      const int depth = rad_c.depth > 0 ? rad_c.depth : 12;
      const auto k = jsr::parse_norm_kind(rad_c.norm);
      const auto g = jsr::gelfand_sequence(s, depth, k, estimator(rad_c, false));
      emit(rad_c, jsr::gelfand_csv(g));
      const double lo = g.lower_envelope(g.entries.size() - 1);
      const double hi = std::max(lo, g.upper_envelope(g.entries.size() - 1));
      std::string witness;
      for (auto i : g.witness) witness += (witness.empty() ? "" : " ") + std::to_string(i + 1);
      std::ostream& info = rad_c.out.empty() ? std::cerr : std::cout;
      info << "bracket [" << jsr::format_double(lo) << ", " << jsr::format_double(hi)
           << "] depth " << depth << " norm " << jsr::to_string(k) << " witness " << witness
           << "\n";
      return kOk;
    }

    if (*ch) {
      const auto id = jsr::parse_theorem_id(ch_theorem);
      const auto inst = jsr::parse_instance_file(read_file(ch_file));
      if (!ch_weights.empty()) {
        std::vector<double> w;
        std::stringstream ss(ch_weights);
        std::string tok;
        while (std::getline(ss, tok, ',')) w.push_back(std::stod(tok));
        tp.weights = w;
      }
      if (ch_alpha_opt->count()) tp.alpha = ch_alpha;
      if (ch_alpha2_opt->count()) tp.alpha2 = ch_alpha2;
      jsr::ChainSettings st;
      st.depth = ch_c.depth > 0 ? ch_c.depth : 8;
      st.norm = jsr::parse_norm_kind(ch_c.norm);
      st.estimator = estimator(ch_c, true);
      if (ch_seed_opt->count())
        st.seed = ch_seed;
      else if (inst.metadata.contains("seed") && inst.metadata["seed"].is_number_unsigned())
        st.seed = inst.metadata["seed"].get<std::uint64_t>();
      const auto report = jsr::run_theorem(id, inst.sets, tp, st);
      emit(ch_c, jsr::report_json(report));
      if (report.verdict == jsr::Verdict::Indeterminate)
        std::cerr << "note: an equality link is undecided at this depth; raise --depth\n";
      return report.verdict == jsr::Verdict::Violated ? kViolated : kOk;
    }

    if (*sym) {
      const auto sets = jsr::parse_instance(read_file(sym_file));
      if (sym_set > sets.size()) throw jsr::DomainError("--set out of range");
      const auto& s = sets[sym_set - 1];
      const int depth = sym_c.depth > 0 ? sym_c.depth : 8;
      const auto k = jsr::parse_norm_kind(sym_c.norm);
      const auto opts = estimator(sym_c, true);
      const auto seq =
          sym_alpha2_opt->count()
              ? jsr::symmetrization_sequence_ab(s, sym_alpha, sym_alpha2, sym_levels, depth, k,
                                                opts)
              : jsr::symmetrization_sequence(s, sym_alpha, sym_levels, depth, k, opts);
      emit(sym_c, jsr::symmetrization_csv(seq));
      return kOk;
    }

    if (*va) {
      jsr::BatchOptions bo;
      const auto dots = va_seeds.find("..");
      if (dots == std::string::npos) {
        bo.seed_first = bo.seed_last = parse_u64(va_seeds);
      } else {
        bo.seed_first = parse_u64(va_seeds.substr(0, dots));
        bo.seed_last = parse_u64(va_seeds.substr(dots + 2));
      }
      if (bo.seed_last < bo.seed_first) throw jsr::DomainError("--seeds: empty range");
      bo.settings.depth = va_c.depth > 0 ? va_c.depth : 6;
      bo.settings.norm = jsr::parse_norm_kind(va_c.norm);
      bo.settings.estimator = estimator(va_c, true);
      const auto summary = jsr::verify_batch(bo);
      emit(va_c, jsr::format_summary(summary, bo));
      return summary.any_violated() ? kViolated : kOk;
    }
  } catch (const jsr::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const jsr::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
