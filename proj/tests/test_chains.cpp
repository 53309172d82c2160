#include <doctest.h>

#include <cmath>

#include "jsr/chains.hpp"
#include "oracle/oracle.hpp"
#include "support/gen.hpp"

using jsr::ChainReport;
using jsr::MatrixSet;
using jsr::NonnegMatrix;
using jsr::Relation;
using jsr::Verdict;
using jsr::WeightVector;

namespace {

jsr::RadiusBracket br(double lo, double hi) { return {lo, hi, 1, jsr::NormKind::RowSum}; }

ChainReport synthetic(std::vector<std::pair<jsr::RadiusBracket, Relation>> links) {
  ChainReport r;
  for (auto& [b, rel] : links) r.links.push_back({"x", b, rel});
  jsr::evaluate_chain(r);
  return r;
}

MatrixSet single(const NonnegMatrix& a) { return MatrixSet::singleton(a); }

std::vector<MatrixSet> singles(const std::vector<NonnegMatrix>& m) {
  std::vector<MatrixSet> out;
  for (const auto& a : m) out.push_back(single(a));
  return out;
}

void check_all_equal(const ChainReport& r, double v, double tol) {
  for (const auto& l : r.links) {
    CAPTURE(l.label);
    CHECK(l.bracket.contains(v, tol * std::max(1.0, v)));
  }
}

void check_le_margins(const ChainReport& r) {
  std::size_t k = 0;
  for (const auto& l : r.links) {
    if (l.relation_to_next == Relation::End) continue;
    if (l.relation_to_next == Relation::Le) CHECK(r.margins[k] >= -1e-9);
    ++k;
  }
  CHECK(k == r.margins.size());
}

jsr::ChainSettings fast() {
  jsr::ChainSettings s;
  s.depth = 6;
  s.estimator.word_budget = 2000;
  return s;
}

std::vector<MatrixSet> scale_sets(const std::vector<MatrixSet>& sets, double c) {
  std::vector<MatrixSet> out;
  for (const auto& s : sets) {
    std::vector<NonnegMatrix> m;
    for (const auto& a : s) m.push_back(jsr::scaled(a, c));
    out.emplace_back(std::move(m));
  }
  return out;
}

std::vector<MatrixSet> conjugate(const std::vector<MatrixSet>& sets, const NonnegMatrix& p) {
  std::vector<MatrixSet> out;
  for (const auto& s : sets) {
    std::vector<NonnegMatrix> m;
    for (const auto& a : s)
      m.push_back(jsr::matrix_product(jsr::matrix_product(p, a), jsr::transpose(p)));
    out.emplace_back(std::move(m));
  }
  return out;
}

}  // namespace

TEST_CASE("verdict semantics") {
  auto ok = synthetic({{br(1, 2), Relation::Le}, {br(1.5, 3), Relation::End}});
  CHECK(ok.verdict == Verdict::Verified);
  REQUIRE(ok.margins.size() == 1);
  CHECK(ok.margins[0] == 2.0);

  // lo_0 exceeds hi of a later (not adjacent) link
  auto bad = synthetic({{br(5, 6), Relation::Le}, {br(1, 7), Relation::Le}, {br(1, 4), Relation::End}});
  CHECK(bad.verdict == Verdict::Violated);
  CHECK(bad.margins[0] == -1.0);

  // within tolerance is not a violation
  auto edge = synthetic({{br(1 + 5e-10, 1 + 5e-10), Relation::Le}, {br(1, 1), Relation::End}});
  CHECK(edge.verdict == Verdict::Verified);

  // equality: overlapping but wide
  auto wide = synthetic({{br(1, 2), Relation::Eq}, {br(1.5, 2.5), Relation::End}});
  CHECK(wide.verdict == Verdict::Indeterminate);
  CHECK(wide.margins[0] == 0.5);
  // equality: tight
  auto tight = synthetic({{br(1, 1 + 1e-12), Relation::Eq}, {br(1, 1 + 1e-12), Relation::End}});
  CHECK(tight.verdict == Verdict::Verified);
  // equality: disjoint in the reverse direction
  auto rev = synthetic({{br(1, 1.1), Relation::Eq}, {br(2, 2.1), Relation::End}});
  CHECK(rev.verdict == Verdict::Violated);

  // sub-chains are checked separately
  auto seg = synthetic({{br(5, 6), Relation::End}, {br(1, 2), Relation::Le}, {br(1, 2), Relation::End}});
  CHECK(seg.verdict == Verdict::Verified);
  CHECK(seg.margins.size() == 1);
}

TEST_CASE("theorem id names round-trip") {
  for (auto id : jsr::all_theorems()) CHECK(jsr::parse_theorem_id(jsr::to_string(id)) == id);
  CHECK(jsr::all_theorems().size() == 15);
  CHECK_THROWS_AS(jsr::parse_theorem_id("nope"), jsr::DomainError);
}

TEST_CASE("chain_zhan examples") {
  const NonnegMatrix p{{0, 1}, {1, 0}};
  const auto r = jsr::chain_zhan(p, p, 0.5);
  CHECK(r.verdict == Verdict::Verified);
  check_all_equal(r, 1.0, 1e-9);

  const NonnegMatrix j{{1, 1}, {1, 1}};
  // links 2, 2, 2^(3/2), 4
  const auto rj = jsr::chain_zhan(j, j, 0.3);
  CHECK(rj.verdict == Verdict::Verified);
  CHECK(rj.links[1].bracket.contains(2.0, 1e-9));
  CHECK(rj.links[2].bracket.contains(std::sqrt(8.0), 1e-9));
  CHECK(rj.links[3].bracket.contains(4.0, 1e-9));

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CAPTURE(seed);
    gen::Rng rng(seed);
    const auto a = gen::positive(rng, 4), b = gen::positive(rng, 4);
    const auto z = jsr::chain_zhan(a, b, 0.3);
    CHECK(z.verdict == Verdict::Verified);
    check_le_margins(z);
    const auto rho = [](const NonnegMatrix& m) { return oracle::spectral_radius(m).value; };
    CHECK(z.links[0].bracket.contains(rho(jsr::hadamard_product(a, b)), 1e-9));
    CHECK(z.links[3].bracket.contains(rho(jsr::matrix_product(a, b)), 1e-9));
  }
  CHECK_THROWS_AS(jsr::chain_zhan(p, NonnegMatrix::ones(3), 0.5), jsr::DimensionError);
  CHECK_THROWS_AS(jsr::chain_zhan(p, p, 1.5), jsr::DomainError);
}

TEST_CASE("chain_huang examples") {
  const NonnegMatrix d{{2, 0}, {0, 5}};
  const std::vector<NonnegMatrix> ds{d, d, d};
  check_all_equal(jsr::chain_huang(ds), 5.0, 1e-9);
  gen::Rng rng(2);
  const auto a = gen::positive(rng, 3);
  const std::vector<NonnegMatrix> one{a};
  check_all_equal(jsr::chain_huang(one), oracle::spectral_radius(a).value, 1e-9);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    gen::Rng r(seed);
    const std::vector<NonnegMatrix> t{gen::matrix(r, 3, 0.7), gen::matrix(r, 3, 0.7),
                                      gen::matrix(r, 3, 0.7)};
    const auto h = jsr::chain_huang(t);
    CHECK(h.verdict == Verdict::Verified);
    check_le_margins(h);
  }
}

TEST_CASE("chain_powers") {
  const auto id = single(NonnegMatrix::identity(3));
  const auto r = jsr::chain_powers({id, id}, WeightVector::uniform(2), 2, fast());
  CHECK(r.verdict == Verdict::Verified);
  check_all_equal(r, 1.0, 1e-12);

  gen::Rng rng(3);
  const std::vector<NonnegMatrix> mats{gen::positive(rng, 3), gen::positive(rng, 3)};
  const auto pw = jsr::chain_powers(singles(mats), WeightVector::uniform(2), 2, fast());
  const auto hu = jsr::chain_huang(mats);
  // the uniform-weight sub-chain reproduces the single-matrix values
  CHECK(gen::rel_eq(pw.links[3].bracket.lo, hu.links[0].bracket.lo, 1e-10));
  CHECK(gen::rel_eq(pw.links[4].bracket.lo, hu.links[2].bracket.lo, 1e-10));

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CAPTURE(seed);
    gen::Rng g(seed);
    const auto sets = gen::sets(g, 3, 2, 2, 0.8);
    const auto c = jsr::chain_powers(sets, WeightVector::convex(gen::convex_weights(g, 2)), 2, fast());
    CHECK(c.verdict != Verdict::Violated);
    check_le_margins(c);
  }
  CHECK_THROWS_AS(jsr::chain_powers({id, id}, WeightVector::super({1, 1}), 2), jsr::DomainError);
  CHECK_THROWS_AS(jsr::chain_powers({id, id}, WeightVector::uniform(3), 2), jsr::DimensionError);
}

TEST_CASE("chain_folge") {
  gen::Rng rng(4);
  const auto sets = gen::sets(rng, 3, 2, 2);
  const auto r = jsr::chain_folge(sets, WeightVector::super({1.0, 0.7}), 2.0, 2, fast());
  CHECK(r.verdict != Verdict::Violated);
  CHECK(r.skipped.empty());
  const auto s = jsr::chain_folge(sets, WeightVector::super({1.0, 0.7}), 0.5, 2, fast());
  REQUIRE(s.skipped.size() == 1);
  CHECK(s.skipped[0].reason.rfind("skipped: hypothesis", 0) == 0);
}

TEST_CASE("chain_refin and equality upgrades") {
  const auto id = single(NonnegMatrix::identity(2));
  const auto r = jsr::chain_refin(id, id, 0.5, fast());
  CHECK(r.verdict == Verdict::Verified);
  check_all_equal(r, 1.0, 1e-12);

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CAPTURE(seed);
    gen::Rng g(seed);
    const auto a = gen::positive(g, 3), b = gen::positive(g, 3);
    const auto s = jsr::chain_refin(single(a), single(b), 0.4, fast());
    CHECK(s.verdict == Verdict::Verified);
    const double ab = std::sqrt(oracle::spectral_radius(jsr::matrix_product(a, b)).value);
    CHECK(s.links.back().bracket.contains(ab, 1e-8));
    CHECK(s.links[5].bracket.contains(ab, 1e-8));
    CHECK(s.links[6].bracket.contains(ab, 1e-8));

    const auto sets = gen::sets(g, 2, 2, 2, 0.8);
    CHECK(jsr::chain_refin(sets[0], sets[1], 0.5, fast()).verdict != Verdict::Violated);
  }
}

TEST_CASE("chain_kathyprop_eq on singletons matches the oracle") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CAPTURE(seed);
    gen::Rng g(seed);
    const auto a = gen::matrix(g, 3, 0.8), b = gen::matrix(g, 3, 0.8);
    const auto w = WeightVector::convex(gen::convex_weights(g, 3));
    const auto r = jsr::chain_kathyprop_eq(single(a), single(b), w, 0.3, fast());
    CHECK(r.verdict == Verdict::Verified);
    const double ra = oracle::spectral_radius(a).value;
    const double rab = oracle::spectral_radius(jsr::matrix_product(a, b)).value;
    CHECK(r.links[0].bracket.contains(ra, 1e-8 * std::max(1.0, ra)));
    CHECK(r.links[1].bracket.contains(ra, 1e-8 * std::max(1.0, ra)));
    for (std::size_t i = 2; i < 5; ++i) CHECK(r.links[i].bracket.contains(rab, 1e-8 * std::max(1.0, rab)));
  }
}

TEST_CASE("chain_kathyprop_mat") {
  const auto id = single(NonnegMatrix::identity(3));
  check_all_equal(jsr::chain_kathyprop_mat(id, 3, 2.0, 2, fast()), 1.0, 1e-12);
  const auto d = jsr::chain_kathyprop_mat(single(NonnegMatrix{{2, 0}, {0, 3}}), 2, 1.0, 2, fast());
  CHECK(d.links[0].bracket.contains(9.0, 1e-8));
  CHECK(d.links[3].bracket.contains(9.0, 1e-8));
  CHECK(d.verdict == Verdict::Verified);
  gen::Rng g(5);
  const auto r = jsr::chain_kathyprop_mat(gen::set(g, 3, 2), 2, 2.5, 2, fast());
  CHECK(r.verdict != Verdict::Violated);
  check_le_margins(r);
  CHECK_THROWS_AS(jsr::chain_kathyprop_mat(id, 2, 0.5, 2), jsr::DomainError);
}

TEST_CASE("chain_finally and chain_finally2") {
  const auto id = single(NonnegMatrix::identity(2));
  const jsr::SetGrid ids{{id, id}, {id, id}};
  check_all_equal(jsr::chain_finally(ids, WeightVector::uniform(2), 2, jsr::WeightMode::Kernel, fast()),
                  1.0, 1e-12);
  const auto z = single(NonnegMatrix::zero(2));
  check_all_equal(jsr::chain_finally2({{z, z}, {z, z}}, WeightVector::uniform(2), 2,
                                      jsr::WeightMode::Kernel, fast()),
                  0.0, 1e-12);

  gen::Rng g(6);
  const auto sets = gen::sets(g, 3, 2, 2);
  const auto w = WeightVector::convex({0.3, 0.7});
  const auto p = jsr::chain_powers(sets, w, 2, fast());
  using GridChain = ChainReport (*)(const jsr::SetGrid&, const WeightVector&, int, jsr::WeightMode,
                                    const jsr::ChainSettings&);
  for (GridChain f : {GridChain{&jsr::chain_finally}, GridChain{&jsr::chain_finally2}}) {
    const auto k1 = f({sets}, w, 2, jsr::WeightMode::Kernel, fast());
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(k1.links[i + 1].bracket.lo == p.links[i].bracket.lo);
      CHECK(k1.links[i + 1].bracket.hi == p.links[i].bracket.hi);
    }
  }

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CAPTURE(seed);
    gen::Rng r(seed);
    const jsr::SetGrid grid{{single(gen::matrix(r, 3)), single(gen::matrix(r, 3))},
                            {single(gen::matrix(r, 3)), single(gen::matrix(r, 3))}};
    const auto f = jsr::chain_finally(grid, WeightVector::convex({0.4, 0.6}), 2,
                                      jsr::WeightMode::Kernel, fast());
    CHECK(f.verdict == Verdict::Verified);
    check_le_margins(f);
    const auto col = jsr::matrix_product(grid[0][0][0], grid[1][0][0]);
    const auto m = jsr::chain_finally2(grid, WeightVector::super({1.0, 0.5}), 2,
                                       jsr::WeightMode::Matrix, fast());
    CHECK(m.verdict == Verdict::Verified);
    (void)col;
  }
  CHECK_THROWS_AS(jsr::chain_finally(ids, WeightVector::super({1, 1}), 2, jsr::WeightMode::Kernel),
                  jsr::DomainError);
  CHECK_THROWS_AS(jsr::chain_finally({{id, id}, {id}}, WeightVector::uniform(2), 2,
                                     jsr::WeightMode::Kernel),
                  jsr::DimensionError);
}

TEST_CASE("chain_kathyth1") {
  gen::Rng g(7);
  const auto psi = gen::set(g, 3, 2);
  const auto one = jsr::chain_kathyth1({psi}, 2, fast());
  CHECK(one.verdict == Verdict::Verified);

  const std::vector<NonnegMatrix> diag{NonnegMatrix{{2, 0}, {0, 1}}, NonnegMatrix{{3, 0}, {0, 1}},
                                       NonnegMatrix{{1, 0}, {0, 4}}};
  const auto d = jsr::chain_kathyth1(singles(diag), 2, fast());
  // rho of the geometric mean of commuting diagonals: max_i (prod_j d_ij)^(1/3)
  check_all_equal(d, std::cbrt(6.0), 1e-9);

  int strictly_between = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CAPTURE(seed);
    gen::Rng r(seed);
    const std::vector<NonnegMatrix> t{gen::positive(r, 3), gen::positive(r, 3), gen::positive(r, 3)};
    const auto k = jsr::chain_kathyth1(singles(t), 2, fast());
    CHECK(k.verdict == Verdict::Verified);
    const auto h = jsr::chain_huang(t);
    // link for link with the single-matrix chain
    CHECK(gen::rel_eq(k.links[0].bracket.lo, h.links[0].bracket.lo, 1e-10));
    CHECK(gen::rel_eq(k.links[1].bracket.lo, h.links[1].bracket.lo, 1e-10));
    CHECK(gen::rel_eq(k.links[3].bracket.lo, h.links[2].bracket.lo, 1e-10));
    if (k.links[1].bracket.lo > k.links[0].bracket.hi && k.links[1].bracket.hi < k.links[3].bracket.lo)
      ++strictly_between;
  }
  CHECK(strictly_between > 10);
}

TEST_CASE("chain_equalities_joint") {
  const auto id = single(NonnegMatrix::identity(3));
  check_all_equal(jsr::chain_equalities_joint({id, id}, WeightVector::uniform(2), 0.3, fast()), 1.0, 1e-12);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CAPTURE(seed);
    gen::Rng g(seed);
    const std::vector<NonnegMatrix> t{gen::matrix(g, 3, 0.8), gen::matrix(g, 3, 0.8)};
    const auto r = jsr::chain_equalities_joint(singles(t), WeightVector::convex({0.6, 0.4}), 0.25, fast());
    CHECK(r.verdict == Verdict::Verified);
    const double v = oracle::spectral_radius(jsr::matrix_product(t[0], t[1])).value;
    check_all_equal(r, v, 1e-8);

    const auto sets = gen::sets(g, 2, 2, 2, 0.8);
    const auto s = jsr::chain_equalities_joint(sets, WeightVector::uniform(2), 0.25, fast());
    CHECK(s.verdict != Verdict::Violated);
    for (double m : s.margins) CHECK(m >= -1e-9);
  }
}

TEST_CASE("chain_kathyth2") {
  const auto id = single(NonnegMatrix::identity(2));
  for (double a : {0.5, 1.0, 2.0}) check_all_equal(jsr::chain_kathyth2({id, id}, a, 2, fast()), 1.0, 1e-12);

  gen::Rng g(8);
  const auto psi = gen::set(g, 3, 2);
  const auto m1 = jsr::chain_kathyth2({psi}, 1.0, 2, fast());
  CHECK(m1.verdict == Verdict::Verified);

  const auto pair = gen::sets(g, 3, 2, 2);
  const auto r = jsr::chain_kathyth2(pair, 1.0, 2, fast());
  CHECK(r.verdict != Verdict::Violated);
  CHECK(r.skipped.empty());
  check_le_margins(r);

  const auto low = jsr::chain_kathyth2(pair, 0.7, 2, fast());
  CHECK(low.skipped.size() == 2);
  CHECK(low.links.size() < r.links.size());
  CHECK_THROWS_AS(jsr::chain_kathyth2(pair, 0.4, 2), jsr::DomainError);
}

TEST_CASE("chain_geom_sym") {
  gen::Rng g(9);
  const std::vector<NonnegMatrix> s{gen::symmetric(g, 3), gen::symmetric(g, 3)};
  const auto r = jsr::chain_geom_sym(singles(s), 0.5, 2, fast());
  CHECK(r.verdict == Verdict::Verified);
  const double v = oracle::spectral_radius(jsr::matrix_product(s[0], s[1])).value;
  // S(A) = A, so the product chain ties with r(A1 A2)
  CHECK(r.links[0].bracket.contains(v, 1e-8));
  CHECK(r.links[4].bracket.contains(v, 1e-8));

  const auto one = jsr::chain_geom_sym({gen::set(g, 2, 2)}, 0.3, 2, fast());
  CHECK(one.verdict != Verdict::Violated);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CAPTURE(seed);
    gen::Rng r2(seed);
    const auto pair = gen::sets(r2, 2, 2, 1);
    const auto m = jsr::chain_geom_sym(pair, 1.0, 2, fast(), std::pair{1.0, 1.0});
    CHECK(m.verdict == Verdict::Verified);
    CHECK(m.theorem_id == "geom-sym-mat");
    const double t = oracle::spectral_radius(jsr::matrix_product(pair[0][0], pair[1][0])).value;
    CHECK(m.links[4].bracket.contains(t * t, 1e-8 * t * t));
  }
  CHECK_THROWS_AS(jsr::chain_geom_sym({single(NonnegMatrix::identity(2))}, 1.5, 2), jsr::DomainError);
}

TEST_CASE("sequence chains") {
  gen::Rng g(10);
  const auto psi = gen::set(g, 2, 2, 0.8);
  const auto r = jsr::chain_sym_mono(psi, 0.3, 3, fast());
  CHECK(r.verdict == Verdict::Verified);
  CHECK(r.links.size() == 5);
  const auto m = jsr::chain_sym_mat(psi, 0.7, 0.5, 3, fast());
  CHECK(m.verdict == Verdict::Verified);
}

TEST_CASE("reports embed their settings") {
  auto s = fast();
  s.seed = 1234;
  const auto r = jsr::chain_kathyth1({single(NonnegMatrix::identity(2))}, 2, s);
  CHECK(r.settings.seed == 1234);
  CHECK(r.settings.depth == 6);
  CHECK(r.theorem_id == "kathyth1");
}

TEST_CASE("scaling and permutation similarity") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CAPTURE(seed);
    gen::Rng g(seed);
    const auto sets = gen::sets(g, 3, 2, 2, 0.8);
    const auto w = WeightVector::convex({0.3, 0.7});
    const auto base = jsr::chain_powers(sets, w, 2, fast());
    const double c = 4.0;
    const auto sc = jsr::chain_powers(scale_sets(sets, c), w, 2, fast());
    for (std::size_t i = 0; i < base.links.size(); ++i) {
      CHECK(gen::rel_eq(sc.links[i].bracket.lo, c * base.links[i].bracket.lo, 1e-12));
      CHECK(gen::rel_eq(sc.links[i].bracket.hi, c * base.links[i].bracket.hi, 1e-12));
    }
    CHECK(sc.verdict == base.verdict);

    const auto p = gen::permutation(g, 3);
    const auto pc = jsr::chain_powers(conjugate(sets, p), w, 2, fast());
    for (std::size_t i = 0; i < base.links.size(); ++i) {
      CHECK(gen::rel_eq(pc.links[i].bracket.lo, base.links[i].bracket.lo, 1e-10));
      CHECK(gen::rel_eq(pc.links[i].bracket.hi, base.links[i].bracket.hi, 1e-10));
    }
  }
}

TEST_CASE("scalar_mitr_check") {
  gen::Rng g(11);
  auto vec = [&](int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = g.uniform(0.0, 3.0);
    return v;
  };
  const std::vector<double> w{0.4, 0.6};
  CHECK(jsr::scalar_mitr_check({{vec(5), vec(5)}}, w));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
  CHECK(jsr::scalar_mitr_check({{ones, ones}, {ones, ones}, {ones, ones}}, w));
  for (int t = 0; t < 100; ++t) {
    std::vector<std::vector<Eigen::VectorXd>> f(3);
    for (auto& row : f) row = {vec(5), vec(5)};
    CHECK(jsr::scalar_mitr_check(f, w));
    const std::vector<double> sup{1.2, 0.9};
    CHECK(jsr::scalar_mitr_check(f, sup));
  }
  const std::vector<double> small{0.3, 0.3};
  CHECK_THROWS_AS(jsr::scalar_mitr_check({{ones, ones}}, small), jsr::DomainError);
  CHECK_THROWS_AS(jsr::scalar_mitr_check({{ones, Eigen::VectorXd::Ones(3)}}, w), jsr::DimensionError);
}
