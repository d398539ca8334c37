#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "padicspec/cyclotomic.hpp"

using namespace padicspec;

namespace {

std::complex<double> evaluate(const GroupRingElement& z) { return oracle::value(z); }

GroupRingElement random_element(std::mt19937_64& rng, std::uint64_t p, unsigned n, int width) {
  const std::uint64_t m = ipow(p, n);
  std::uniform_int_distribution<int> coeff(-width, width);
  std::vector<GroupRingElement::Term> terms;
  for (std::uint64_t e = 0; e < m; ++e) terms.emplace_back(e, BigInt(coeff(rng)));
  return GroupRingElement::from_terms(p, n, std::move(terms));
}

// Random element whose fibers are constant, plus a sparse perturbation that
// usually breaks them; exercises both answers of is_zero.
GroupRingElement random_near_zero(std::mt19937_64& rng, std::uint64_t p, unsigned n) {
  const std::uint64_t m = ipow(p, n), stride = m / p;
  std::uniform_int_distribution<int> coeff(-5, 5);
  std::vector<GroupRingElement::Term> terms;
  for (std::uint64_t r = 0; r < stride; ++r) {
    const int c = coeff(rng);
    for (std::uint64_t j = 0; j < p; ++j) terms.emplace_back(r + j * stride, BigInt(c));
  }
  if (rng() % 2) terms.emplace_back(rng() % m, BigInt(coeff(rng)));
  return GroupRingElement::from_terms(p, n, std::move(terms));
}

}  // namespace

TEST_CASE("from_exponents examples", "[cyclotomic]") {
  auto a = GroupRingElement::from_exponents(2, 2, {0, 1, 2, 3});
  CHECK(a.terms() == std::vector<GroupRingElement::Term>{{0, 1}, {1, 1}, {2, 1}, {3, 1}});
  auto b = GroupRingElement::from_exponents(3, 1, {0, 3, 6});
  CHECK(b.terms() == std::vector<GroupRingElement::Term>{{0, 3}});
  auto c = GroupRingElement::from_exponents(2, 2, {5});
  CHECK(c.terms() == std::vector<GroupRingElement::Term>{{1, 1}});
  auto d = GroupRingElement::from_exponents(3, 2, {-1});
  CHECK(d.coeff(8) == 1);
}

TEST_CASE("is_zero examples", "[cyclotomic]") {
  CHECK(GroupRingElement::from_exponents(3, 1, {0, 1, 2}).is_zero());
  CHECK(GroupRingElement::from_exponents(2, 2, {0, 2}).is_zero());
  CHECK_FALSE(GroupRingElement::from_exponents(2, 2, {0, 1}).is_zero());
  CHECK(GroupRingElement::from_terms(2, 2, {{0, 2}, {2, 2}}).is_zero());
  CHECK_FALSE(GroupRingElement::from_terms(2, 2, {{0, 2}, {2, 1}}).is_zero());
  CHECK(GroupRingElement(5, 3).is_zero());
  CHECK_FALSE(GroupRingElement::monomial(2, 0, 0, 1).is_zero());
  CHECK(GroupRingElement::monomial(2, 0, 0, 0).is_zero());
}

TEST_CASE("is_zero agrees with complex evaluation", "[cyclotomic][oracle]") {
  std::mt19937_64 rng(424242);
  std::size_t zeros = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    const std::uint64_t p = std::array<std::uint64_t, 3>{2, 3, 5}[trial % 3];
    const unsigned n = 1 + static_cast<unsigned>(rng() % (p == 5 ? 3 : 5));
    const GroupRingElement z = trial % 2 ? random_element(rng, p, n, 2) : random_near_zero(rng, p, n);
    const bool numeric = std::abs(evaluate(z)) < 1e-9;
    REQUIRE(z.is_zero() == numeric);
    zeros += numeric;
  }
  CHECK(zeros > 100);
}

TEST_CASE("arithmetic is a ring homomorphism to C", "[cyclotomic][oracle]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint64_t p = trial % 2 ? 2 : 3;
    const unsigned n = 1 + static_cast<unsigned>(rng() % 3);
    const auto x = random_element(rng, p, n, 3), y = random_element(rng, p, n, 3);
    REQUIRE(std::abs(evaluate(x + y) - (evaluate(x) + evaluate(y))) < 1e-8);
    REQUIRE(std::abs(evaluate(x - y) - (evaluate(x) - evaluate(y))) < 1e-8);
    REQUIRE(std::abs(evaluate(x * y) - evaluate(x) * evaluate(y)) < 1e-6);
    REQUIRE(std::abs(evaluate(x.conj()) - std::conj(evaluate(x))) < 1e-8);
    REQUIRE(std::abs(evaluate(x.norm_squared()) - std::norm(evaluate(x))) < 1e-6);
    REQUIRE((x - x).is_zero());
  }
}

TEST_CASE("norm_squared of a vanishing sum vanishes", "[cyclotomic]") {
  const auto z = GroupRingElement::from_exponents(3, 1, {0, 1, 2});
  const auto n = z.norm_squared();
  CHECK(n.terms() == std::vector<GroupRingElement::Term>{{0, 3}, {1, 3}, {2, 3}});
  CHECK(n.is_zero());
  // Dropping the constant leaves a non-constant fiber.
  CHECK_FALSE((n - GroupRingElement::monomial(3, 1, 0, 3)).is_zero());
}

TEST_CASE("decompose_zero_sum examples", "[cyclotomic]") {
  using V = std::vector<std::vector<std::uint64_t>>;
  CHECK(decompose_zero_sum(GroupRingElement::from_exponents(2, 2, {0, 1, 2, 3})) == V{{0, 2}, {1, 3}});
  CHECK(decompose_zero_sum(GroupRingElement::from_exponents(3, 1, {0, 1, 2})) == V{{0, 1, 2}});
  CHECK(decompose_zero_sum(GroupRingElement::from_exponents(2, 3, {0, 1, 4, 5})) == V{{0, 4}, {1, 5}});
  CHECK_THROWS_AS(decompose_zero_sum(GroupRingElement::from_exponents(2, 2, {0, 1})), std::invalid_argument);
  CHECK_THROWS_AS(decompose_zero_sum(GroupRingElement::from_exponents(2, 2, {0, 0, 2, 2})), std::invalid_argument);
}

TEST_CASE("decompose_zero_sum pieces partition the support and vanish", "[cyclotomic][property]") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint64_t p = trial % 3 == 0 ? 3 : 2;
    const unsigned n = 1 + static_cast<unsigned>(rng() % 4);
    const std::uint64_t stride = ipow(p, n) / p;
    std::vector<std::int64_t> ex;
    for (std::uint64_t r = 0; r < stride; ++r)
      if (rng() % 2)
        for (std::uint64_t j = 0; j < p; ++j) ex.push_back(static_cast<std::int64_t>(r + j * stride));
    const auto z = GroupRingElement::from_exponents(p, n, ex);
    const auto pieces = decompose_zero_sum(z);
    std::vector<std::int64_t> seen;
    for (const auto& piece : pieces) {
      REQUIRE(piece.size() == p);
      std::vector<std::int64_t> e(piece.begin(), piece.end());
      REQUIRE(GroupRingElement::from_exponents(p, n, e).is_zero());
      seen.insert(seen.end(), e.begin(), e.end());
    }
    std::sort(seen.begin(), seen.end());
    std::sort(ex.begin(), ex.end());
    REQUIRE(seen == ex);
  }
}

TEST_CASE("rotate examples", "[cyclotomic]") {
  const auto z = GroupRingElement::from_exponents(3, 1, {0, 1, 2});
  CHECK(z.rotate(1) == z);
  CHECK(z.rotate(2).is_zero());
  CHECK(z.rotate(2) == GroupRingElement::from_exponents(3, 1, {0, 2, 1}));
  const auto w = GroupRingElement::from_exponents(2, 3, {0, 4});
  CHECK(w.rotate(3) == w);
  CHECK(w.rotate(3).is_zero());
  CHECK_THROWS(z.rotate(3));
}

TEST_CASE("rotation preserves vanishing", "[cyclotomic][property]") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint64_t p = trial % 2 ? 2 : 5;
    const unsigned n = 1 + static_cast<unsigned>(rng() % 3);
    const auto z = random_near_zero(rng, p, n);
    std::int64_t u = static_cast<std::int64_t>(rng() % ipow(p, n));
    if (u % static_cast<std::int64_t>(p) == 0) ++u;
    REQUIRE(z.rotate(u).is_zero() == z.is_zero());
  }
}

TEST_CASE("lift embeds into a deeper level", "[cyclotomic][property]") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto z = random_near_zero(rng, 3, 2);
    const auto up = z.lift(4);
    REQUIRE(up.level() == 4);
    REQUIRE(up.is_zero() == z.is_zero());
    REQUIRE(std::abs(evaluate(up) - evaluate(z)) < 1e-8);
  }
  CHECK_THROWS(GroupRingElement(2, 3).lift(2));
}

TEST_CASE("mismatched levels are rejected", "[cyclotomic]") {
  CHECK_THROWS(GroupRingElement(2, 2) + GroupRingElement(2, 3));
  CHECK_THROWS(GroupRingElement(2, 2) * GroupRingElement(3, 2));
  CHECK_THROWS(GroupRingElement::from_terms(2, 2, {{4, 1}}));
}
