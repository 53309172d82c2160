#include <doctest.h>

#include <cmath>

#include "oracle/oracle.hpp"
#include "support/gen.hpp"

using jsr::MatrixSet;
using jsr::NonnegMatrix;

TEST_CASE("oracle: permutation and golden ratio") {
  const auto r = oracle::spectral_radius(NonnegMatrix{{0, 1}, {1, 0}});
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.method == "eigen-qr");

  const auto g = oracle::spectral_radius(NonnegMatrix{{1, 1}, {1, 0}});
  CHECK(std::abs(g.value - (1 + std::sqrt(5.0)) / 2) < 1e-13);
}

TEST_CASE("oracle: nilpotent support is exactly zero") {
  // strictly upper triangular with a long chain: QR alone returns ~1e-5
  const NonnegMatrix u{{0, 1, 1, 1}, {0, 0, 1e-3, 1}, {0, 0, 0, 1}, {0, 0, 0, 0}};
  const auto r = oracle::spectral_radius(u);
  CHECK(r.value == 0.0);
  CHECK(r.method == "nilpotent-support");
  // a cycle in the support is not nilpotent
  const auto c = oracle::spectral_radius(NonnegMatrix{{0, 1, 0}, {0, 0, 1}, {1e-6, 0, 0}});
  CHECK(c.method == "eigen-qr");
  CHECK(c.value == doctest::Approx(1e-2).epsilon(1e-9));
}

TEST_CASE("oracle: residual stays small on random matrices") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CAPTURE(seed);
    gen::Rng rng(seed);
    const auto a = gen::matrix(rng, rng.integer(1, 8), rng.uniform(0.3, 1.0));
    const auto r = oracle::spectral_radius(a);
    CHECK(r.residual <= 1e-8 * std::max(1.0, r.value));
  }
}

TEST_CASE("oracle: random 5x5 agrees with the certified bracket") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CAPTURE(seed);
    gen::Rng rng(seed);
    const auto a = gen::matrix(rng, 5, 0.6);
    const auto b = jsr::spectral_radius_bracket(a);
    const double v = oracle::spectral_radius(a).value;
    CHECK(b.contains(v, 1e-10 * std::max(1.0, v)));
  }
}

TEST_CASE("oracle: generalized radius examples") {
  const NonnegMatrix a{{1, 1}, {0, 1}};
  const NonnegMatrix b{{1, 0}, {1, 1}};
  const MatrixSet gold({a, b});
  CHECK(std::abs(oracle::gen_radius(gold, 4).value - 1.6180339887) < 1e-8);

  const NonnegMatrix c{{2, 1}, {1, 3}};
  CHECK(oracle::gen_radius(MatrixSet::singleton(c), 3).value ==
        doctest::Approx(oracle::spectral_radius(c).value).epsilon(1e-12));

  const MatrixSet zeros({NonnegMatrix::zero(2), NonnegMatrix::zero(2)});
  CHECK(oracle::gen_radius(zeros, 3).value == 0.0);

  CHECK_THROWS(oracle::gen_radius(MatrixSet({a, b}), 21));
}
