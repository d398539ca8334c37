#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>
#include <unordered_set>

#include "padicspec/padic.hpp"

using namespace padicspec;

namespace {

// Independent valuation: strip p from numerator and denominator of a rational.
std::int64_t rational_valuation(Rational q, std::uint64_t p) {
  BigInt n = boost::multiprecision::numerator(q), d = boost::multiprecision::denominator(q);
  std::int64_t v = 0;
  while (n % p == 0) { n /= p; ++v; }
  while (d % p == 0) { d /= p; --v; }
  return v;
}

// Digit i of x in Z[1/p]: write x p^{-i} = a / p^m and take floor(a / p^m) mod p.
unsigned rational_digit(const Rational& x, std::uint64_t p, std::int64_t i) {
  Rational y = x;
  if (i >= 0) y /= Rational(big_pow(p, static_cast<unsigned>(i)));
  else y *= Rational(big_pow(p, static_cast<unsigned>(-i)));
  BigInt a = boost::multiprecision::numerator(y), b = boost::multiprecision::denominator(y);
  BigInt q = a / b;
  if (a % b != 0 && a < 0) q -= 1;
  return static_cast<unsigned>(floor_mod(q, BigInt(p)));
}

Rational random_rational(std::mt19937_64& rng, std::uint64_t p) {
  std::uniform_int_distribution<long long> num(-2000, 2000);
  std::uniform_int_distribution<int> shift(-6, 6);
  Rational q(num(rng));
  const int k = shift(rng);
  if (k >= 0) q *= Rational(big_pow(p, static_cast<unsigned>(k)));
  else q /= Rational(big_pow(p, static_cast<unsigned>(-k)));
  return q;
}

}  // namespace

TEST_CASE("prime context rejects composites", "[padic]") {
  CHECK_THROWS_AS(PrimeContext(1), std::invalid_argument);
  CHECK_THROWS_AS(PrimeContext(4), std::invalid_argument);
  CHECK_THROWS_AS(PrimeContext(91), std::invalid_argument);
  CHECK(PrimeContext(2).p() == 2);
  CHECK(PrimeContext(101).p() == 101);
}

TEST_CASE("valuation examples", "[padic]") {
  const PrimeContext p2(2), p3(3);
  CHECK(valuation(PAdic(p3, 18)) == ExtInt(2));
  CHECK(valuation(PAdic(p3)) == ExtInt::pos_inf());
  CHECK(valuation(PAdic::from_rational(p2, Rational(3, 4))) == ExtInt(-2));
}

TEST_CASE("add and neg examples", "[padic]") {
  const PrimeContext p2(2), p3(3);
  const PAdic four = PAdic(p2, 1) + PAdic(p2, 3);
  CHECK(four.unit() == 1);
  CHECK(four.exponent() == 2);
  const PAdic one = PAdic::from_unit_power(p3, 1, -1) + PAdic::from_unit_power(p3, 2, -1);
  CHECK(one == PAdic(p3, 1));
  CHECK(one.to_rational() == Rational(1));
  const PAdic x = PAdic::from_rational(p3, Rational(-17, 27));
  CHECK((x + (-x)).is_zero());
}

TEST_CASE("fractional part examples", "[padic]") {
  const PrimeContext p2(2), p3(3);
  CHECK(fractional_part(PAdic(p2, 5)).is_zero());
  CHECK(fractional_part(PAdic::from_unit_power(p2, 3, -2)).to_rational() == Rational(3, 4));
  CHECK(fractional_part(PAdic::from_rational(p3, Rational(10, 3))).to_rational() == Rational(1, 3));
}

TEST_CASE("character exponent examples", "[padic]") {
  const PrimeContext p2(2), p3(3);
  CHECK(character_exponent(PAdic(p3, 12345)) == 0);
  CHECK(character_exponent(PAdic::from_rational(p2, Rational(1, 2))) == Rational(1, 2));
  CHECK(character_exponent(PAdic::from_unit_power(p3, 4, -2)) == Rational(4, 9));
  // {-1/2} = 1/2 and {-1/3} = 2/3.
  CHECK(character_exponent(PAdic::from_rational(p2, Rational(-1, 2))) == Rational(1, 2));
  CHECK(character_exponent(PAdic::from_rational(p3, Rational(-1, 3))) == Rational(2, 3));
}

TEST_CASE("distance examples", "[padic]") {
  const PrimeContext p2(2), p3(3);
  CHECK(distance(PAdic(p3, 1), PAdic(p3, 4)) == ExtInt(-1));
  CHECK(distance(PAdic(p3, 7), PAdic(p3, 7)) == ExtInt::neg_inf());
  CHECK(distance(PAdic(p2, 1), PAdic(p2, 4)) == ExtInt(0));
}

TEST_CASE("from_rational rejects foreign denominators", "[padic]") {
  const PrimeContext p2(2);
  CHECK_THROWS_AS(PAdic::from_rational(p2, Rational(1, 3)), std::invalid_argument);
  CHECK_NOTHROW(PAdic::from_rational(p2, Rational(5, 64)));
}

TEST_CASE("divide is exact only", "[padic]") {
  const PrimeContext p2(2), p3(3);
  CHECK(divide(PAdic(p2, 6), PAdic(p2, 4)) == PAdic::from_rational(p2, Rational(3, 2)));
  CHECK_THROWS(divide(PAdic(p2, 1), PAdic(p2, 3)));
  CHECK_THROWS(divide(PAdic(p3, 1), PAdic(p3)));
}

TEST_CASE("arithmetic agrees with rational arithmetic", "[padic][oracle]") {
  std::mt19937_64 rng(20241);
  for (std::uint64_t p : {2u, 3u, 5u, 7u}) {
    const PrimeContext ctx(p);
    for (int trial = 0; trial < 2000; ++trial) {
      const Rational a = random_rational(rng, p), b = random_rational(rng, p);
      const PAdic x = PAdic::from_rational(ctx, a), y = PAdic::from_rational(ctx, b);
      REQUIRE((x + y).to_rational() == a + b);
      REQUIRE((x - y).to_rational() == a - b);
      REQUIRE((x * y).to_rational() == a * b);
      REQUIRE(x.to_rational() == a);
      if (a != 0) REQUIRE(x.valuation() == ExtInt(rational_valuation(a, p)));
      if (a != b) REQUIRE(distance(x, y) == ExtInt(-rational_valuation(a - b, p)));
      REQUIRE(((x < y) == (a < b)));
    }
  }
}

TEST_CASE("digits agree with floor-division expansion", "[padic][oracle]") {
  std::mt19937_64 rng(77);
  for (std::uint64_t p : {2u, 3u, 5u}) {
    const PrimeContext ctx(p);
    for (int trial = 0; trial < 500; ++trial) {
      const Rational a = random_rational(rng, p);
      const PAdic x = PAdic::from_rational(ctx, a);
      for (std::int64_t i = -8; i <= 8; ++i) REQUIRE(x.digit(i) == rational_digit(a, p, i));
      // Truncations split x along digit positions.
      for (std::int64_t k = -4; k <= 4; ++k) {
        REQUIRE(x.truncate_below(k) + x.truncate_above(k) == x);
        for (std::int64_t i = -8; i <= 8; ++i) {
          REQUIRE(x.truncate_below(k).digit(i) == (i < k ? x.digit(i) : 0u));
          REQUIRE(x.truncate_above(k).digit(i) == (i >= k ? x.digit(i) : 0u));
        }
      }
      const Rational frac = x.character_exponent();
      REQUIRE(frac >= 0);
      REQUIRE(frac < 1);
      // a - {a} lies in Z_p, i.e. has a p-free denominator.
      REQUIRE(boost::multiprecision::denominator(Rational(a - frac)) % p != 0);
    }
  }
}

TEST_CASE("character index matches fractional part", "[padic]") {
  const PrimeContext p3(3);
  const PAdic x = PAdic::from_rational(p3, Rational(-5, 9));
  // {-5/9} = 4/9, so at level 3 the index is 4 * 3 = 12.
  CHECK(x.character_index(2) == 4);
  CHECK(x.character_index(3) == 12);
  CHECK_THROWS_AS(x.character_index(1), std::domain_error);
}

TEST_CASE("ultrametric inequality", "[padic][property]") {
  std::mt19937_64 rng(9);
  const PrimeContext ctx(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const PAdic x = PAdic::from_rational(ctx, random_rational(rng, 3));
    const PAdic y = PAdic::from_rational(ctx, random_rational(rng, 3));
    const PAdic z = PAdic::from_rational(ctx, random_rational(rng, 3));
    REQUIRE(distance(x, z) <= std::max(distance(x, y), distance(y, z)));
    REQUIRE(distance(x, y) == distance(y, x));
  }
}

TEST_CASE("balls", "[padic]") {
  const PrimeContext p2(2);
  const Ball b{PAdic(p2, 1), -3};  // 1 + 8Z_2
  CHECK(b.contains(PAdic(p2, 9)));
  CHECK(b.contains(PAdic(p2, -7)));
  CHECK_FALSE(b.contains(PAdic(p2, 5)));
  CHECK_FALSE(b.contains(PAdic::from_rational(p2, Rational(1, 2))));
  const Ball c{PAdic(p2, 4), -3};
  CHECK(disjoint(b, c));
  CHECK(b == Ball{PAdic(p2, 17), -3});
  const Ball big{PAdic(p2, 0), 0};  // Z_2
  CHECK_FALSE(disjoint(big, b));
}

TEST_CASE("literal parsing and text round trip", "[padic][roundtrip]") {
  const PrimeContext p2(2), p3(3);
  CHECK(parse_padic(p2, "7") == PAdic(p2, 7));
  CHECK(parse_padic(p2, "-3") == PAdic(p2, -3));
  CHECK(parse_padic(p2, "3/4") == PAdic::from_unit_power(p2, 3, -2));
  CHECK(parse_padic(p2, "3*2^-2") == PAdic::from_unit_power(p2, 3, -2));
  CHECK(parse_padic(p3, "2*p^5") == PAdic::from_unit_power(p3, 2, 5));
  CHECK_THROWS_AS(parse_padic(p2, "1/3"), ParseError);
  CHECK_THROWS_AS(parse_padic(p2, "3*3^2"), ParseError);
  CHECK_THROWS_AS(parse_padic(p2, "3 x"), ParseError);
  CHECK(PAdic::from_unit_power(p2, 3, -2).to_string() == "3*2^-2");
  CHECK(PAdic(p2).to_string() == "0");

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const PAdic x = PAdic::from_rational(p3, random_rational(rng, 3));
    REQUIRE(parse_padic(p3, x.to_string()) == x);
  }
}

TEST_CASE("parse errors carry a location", "[padic]") {
  const PrimeContext p2(2);
  try {
    parse_padic(p2, "5/0");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() >= 3);
  }
}

TEST_CASE("hash is consistent with equality", "[padic]") {
  const PrimeContext p2(2);
  std::unordered_set<PAdic> s;
  s.insert(PAdic::from_rational(p2, Rational(3, 4)));
  s.insert(parse_padic(p2, "3*2^-2"));
  s.insert(PAdic(p2, 3) * PAdic::from_rational(p2, Rational(1, 4)));
  CHECK(s.size() == 1);
}
