#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>

#include "padicspec/arith.hpp"
#include "padicspec/scanner.hpp"

namespace padicspec {

/// A prime p, checked by trial division at construction.
class PrimeContext {
 public:
  explicit PrimeContext(std::uint64_t p) : p_(p) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  }

  std::uint64_t p() const { return p_; }

  friend bool operator==(const PrimeContext&, const PrimeContext&) = default;

 private:
  std::uint64_t p_;
};

/// Exact element of Z[1/p] inside Q_p, stored as unit * p^valuation with p not
/// dividing unit. Zero is the unique value with unit == 0 and carries no
/// valuation.
class PAdic {
 public:
  explicit PAdic(PrimeContext ctx) : ctx_(ctx) {}

  PAdic(PrimeContext ctx, const BigInt& integer) : ctx_(ctx), unit_(integer) { normalize(); }

  PAdic(PrimeContext ctx, std::int64_t integer) : PAdic(ctx, BigInt(integer)) {}

  /// u * p^k for any integer u (p may divide u).
  static PAdic from_unit_power(PrimeContext ctx, const BigInt& u, std::int64_t k) {
    PAdic r(ctx);
    r.unit_ = u;
    r.exp_ = k;
    r.normalize();
    return r;
  }

  /// Throws std::invalid_argument unless the reduced denominator is a power of p.
  static PAdic from_rational(PrimeContext ctx, const Rational& q) {
    BigInt num = boost::multiprecision::numerator(q);
    BigInt den = boost::multiprecision::denominator(q);
    std::int64_t k = 0;
    const BigInt p(ctx.p());
    while (den % p == 0) {
      den /= p;
      --k;
    }
    if (den != 1) throw std::invalid_argument("denominator of " + rational_string(q) + " is not a power of " + std::to_string(ctx.p()));
    return from_unit_power(ctx, num, k);
  }

  const PrimeContext& context() const { return ctx_; }
  std::uint64_t prime() const { return ctx_.p(); }

  bool is_zero() const { return unit_ == 0; }
  const BigInt& unit() const { return unit_; }

  /// Finite valuation; throws for zero.
  std::int64_t exponent() const {
    if (is_zero()) throw std::logic_error("zero has no finite valuation");
    return exp_;
  }

  ExtInt valuation() const { return is_zero() ? ExtInt::pos_inf() : ExtInt(exp_); }

  Rational to_rational() const {
    if (is_zero()) return Rational(0);
    if (exp_ >= 0) return Rational(unit_ * big_pow(prime(), static_cast<unsigned>(exp_)));
    return Rational(unit_, big_pow(prime(), static_cast<unsigned>(-exp_)));
  }

  /// Digit a_i of the expansion sum a_n p^n (a_n in [0, p)).
  unsigned digit(std::int64_t i) const {
    if (is_zero() || i < exp_) return 0;
    const unsigned shift = static_cast<unsigned>(i - exp_);
    const BigInt low = floor_mod(unit_, big_pow(prime(), shift + 1));
    return static_cast<unsigned>(low / big_pow(prime(), shift));
  }

  /// The digits at positions < k, as the non-negative element sum_{n<k} a_n p^n.
  PAdic truncate_below(std::int64_t k) const {
    if (is_zero() || exp_ >= k) return PAdic(ctx_);
    const BigInt m = big_pow(prime(), static_cast<unsigned>(k - exp_));
    return from_unit_power(ctx_, floor_mod(unit_, m), exp_);
  }

  /// x minus its digits below k: the part lying in p^k Z_p.
  PAdic truncate_above(std::int64_t k) const { return *this - truncate_below(k); }

  PAdic fractional_part() const { return truncate_below(0); }

  /// {x} as a rational in [0, 1); chi(x) = exp(2 pi i {x}).
  Rational character_exponent() const { return fractional_part().to_rational(); }

  /// Index e in [0, p^n) with chi(x) = exp(2 pi i e / p^n). Requires v(x) >= -n.
  std::uint64_t character_index(unsigned n) const {
    if (is_zero() || exp_ >= 0) return 0;
    if (exp_ < -static_cast<std::int64_t>(n))
      throw std::domain_error("character of " + to_string() + " needs level " + std::to_string(-exp_));
    const unsigned depth = static_cast<unsigned>(-exp_);
    const BigInt low = floor_mod(unit_, big_pow(prime(), depth));
    return static_cast<std::uint64_t>(low) * ipow(prime(), n - depth);
  }

  PAdic times_p_power(std::int64_t k) const {
    PAdic r = *this;
    if (!r.is_zero()) r.exp_ += k;
    return r;
  }

  PAdic operator-() const {
    PAdic r = *this;
    r.unit_ = -r.unit_;
    return r;
  }

  friend PAdic operator+(const PAdic& x, const PAdic& y) {
    x.check_same(y);
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    const std::int64_t v = std::min(x.exp_, y.exp_);
    BigInt u = x.unit_ * big_pow(x.prime(), static_cast<unsigned>(x.exp_ - v)) +
               y.unit_ * big_pow(x.prime(), static_cast<unsigned>(y.exp_ - v));
    return from_unit_power(x.ctx_, u, v);
  }

  friend PAdic operator-(const PAdic& x, const PAdic& y) { return x + (-y); }

  friend PAdic operator*(const PAdic& x, const PAdic& y) {
    x.check_same(y);
    if (x.is_zero() || y.is_zero()) return PAdic(x.ctx_);
    PAdic r(x.ctx_);
    r.unit_ = x.unit_ * y.unit_;
    r.exp_ = x.exp_ + y.exp_;
    return r;
  }

  PAdic& operator+=(const PAdic& o) { return *this = *this + o; }
  PAdic& operator-=(const PAdic& o) { return *this = *this - o; }

  friend bool operator==(const PAdic& x, const PAdic& y) {
    return x.ctx_ == y.ctx_ && x.unit_ == y.unit_ && (x.is_zero() || x.exp_ == y.exp_);
  }

  /// Order by real value; used only to make containers and outputs deterministic.
  friend std::strong_ordering operator<=>(const PAdic& x, const PAdic& y) {
    const Rational a = x.to_rational(), b = y.to_rational();
    if (a < b) return std::strong_ordering::less;
    if (b < a) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// Text form "u*p^v" with p written as its value, e.g. "3*2^-2"; zero is "0".
  std::string to_string() const {
    if (is_zero()) return "0";
    return unit_.str() + "*" + std::to_string(prime()) + "^" + std::to_string(exp_);
  }

 private:
  void normalize() {
    if (unit_ == 0) {
      exp_ = 0;
      return;
    }
    const BigInt p(prime());
    while (unit_ % p == 0) {
      unit_ /= p;
      ++exp_;
    }
  }

  void check_same(const PAdic& o) const {
    if (!(ctx_ == o.ctx_)) throw std::invalid_argument("p-adic operands over different primes");
  }

  PrimeContext ctx_;
  BigInt unit_ = 0;
  std::int64_t exp_ = 0;
};

inline ExtInt valuation(const PAdic& x) { return x.valuation(); }
inline PAdic fractional_part(const PAdic& x) { return x.fractional_part(); }
inline Rational character_exponent(const PAdic& x) { return x.character_exponent(); }

/// Exponent e with |x - y|_p = p^e, i.e. -v_p(x - y); -inf when x == y.
inline ExtInt distance(const PAdic& x, const PAdic& y) { return -(x - y).valuation(); }

/// Exact quotient; throws std::domain_error when it leaves Z[1/p].
inline PAdic divide(const PAdic& x, const PAdic& y) {
  if (y.is_zero()) throw std::domain_error("division by zero");
  if (x.is_zero()) return x;
  const BigInt& d = y.unit();
  if (x.unit() % d != 0)
    throw std::domain_error(x.to_string() + " / " + y.to_string() + " has no finite p-adic expansion");
  return PAdic::from_unit_power(x.context(), x.unit() / d, x.exponent() - y.exponent());
}

/// Closed ball B(center, p^radius_exponent) = center + p^{-radius_exponent} Z_p.
struct Ball {
  PAdic center;
  std::int64_t radius_exponent;

  bool contains(const PAdic& x) const { return distance(x, center) <= ExtInt(radius_exponent); }

  /// Balls of equal radius are identical or disjoint.
  friend bool operator==(const Ball& a, const Ball& b) {
    return a.radius_exponent == b.radius_exponent && a.contains(b.center);
  }

  friend bool disjoint(const Ball& a, const Ball& b) {
    const std::int64_t r = std::max(a.radius_exponent, b.radius_exponent);
    return distance(a.center, b.center) > ExtInt(r);
  }
};

namespace detail {

// padic_literal := INT | INT "/" INT | INT "*" ("p" | P) "^" INT
inline PAdic scan_padic_literal(Scanner& s, PrimeContext ctx) {
  BigInt a = s.integer();
  if (s.peek() == '/') {
    s.accept('/');
    const std::size_t l = s.line(), c = s.column();
    BigInt b = s.integer();
    if (b == 0) throw ParseError("zero denominator", l, c);
    try {
      return PAdic::from_rational(ctx, Rational(a, b));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), l, c);
    }
  }
  if (s.peek() == '*') {
    s.accept('*');
    const std::size_t l = s.line(), c = s.column();
    if (!s.accept('p')) {
      BigInt base = s.integer();
      if (base != BigInt(ctx.p())) throw ParseError("power base must be p = " + std::to_string(ctx.p()), l, c);
    }
    s.expect('^');
    std::int64_t k = s.small_integer();
    return PAdic::from_unit_power(ctx, a, k);
  }
  return PAdic(ctx, a);
}

}  // namespace detail

/// Parses "7", "-3", "3/4", "3*2^-2" or "3*p^-2". Throws ParseError.
inline PAdic parse_padic(PrimeContext ctx, std::string_view text) {
  detail::Scanner s(text);
  PAdic x = detail::scan_padic_literal(s, ctx);
  if (!s.at_end()) s.fail("trailing characters after p-adic literal");
  return x;
}

}  // namespace padicspec

template <>
struct std::hash<padicspec::PAdic> {
  std::size_t operator()(const padicspec::PAdic& x) const {
    std::size_t h = std::hash<std::string>{}(x.unit().str());
    if (!x.is_zero()) h ^= std::hash<std::int64_t>{}(x.exponent()) * 0x9e3779b97f4a7c15ULL;
    return h;
  }
};
