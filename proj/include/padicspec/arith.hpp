#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace padicspec {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
__extension__ using u128 = unsigned __int128;

/// Integer extended by -inf and +inf.
///
/// Valuations of zero and distances between equal points are infinite; keeping
/// them as explicit markers lets the ultrametric laws hold literally.
class ExtInt {
 public:
  enum class Kind : int { neg_inf = -1, finite = 0, pos_inf = 1 };

  constexpr ExtInt(std::int64_t v = 0) : kind_(Kind::finite), value_(v) {}

  static constexpr ExtInt pos_inf() { return ExtInt(Kind::pos_inf); }
  static constexpr ExtInt neg_inf() { return ExtInt(Kind::neg_inf); }

  constexpr bool is_finite() const { return kind_ == Kind::finite; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::neg_inf; }
  constexpr Kind kind() const { return kind_; }

  std::int64_t value() const {
    if (!is_finite()) throw std::logic_error("ExtInt::value on infinite marker");
    return value_;
  }

  constexpr ExtInt operator-() const {
    switch (kind_) {
      case Kind::pos_inf: return neg_inf();
      case Kind::neg_inf: return pos_inf();
      default: return ExtInt(-value_);
    }
  }

  friend constexpr bool operator==(const ExtInt& a, const ExtInt& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(const ExtInt& a, const ExtInt& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    if (a.kind_ != Kind::finite) return std::strong_ordering::equal;
    return a.value_ <=> b.value_;
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::pos_inf: return "+inf";
      case Kind::neg_inf: return "-inf";
      default: return std::to_string(value_);
    }
  }
  friend std::ostream& operator<<(std::ostream& os, const ExtInt& e) { return os << e.to_string(); }

 private:
  constexpr explicit ExtInt(Kind k) : kind_(k), value_(0) {}
  Kind kind_;
  std::int64_t value_;
};

/// p^k in 64-bit arithmetic; throws std::overflow_error when it does not fit.
inline std::uint64_t ipow(std::uint64_t p, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / p)
      throw std::overflow_error("p^" + std::to_string(k) + " exceeds 64 bits");
    r *= p;
  }
  return r;
}

inline BigInt big_pow(std::uint64_t p, unsigned k) {
  return boost::multiprecision::pow(BigInt(p), k);
}

/// Non-negative remainder of a modulo m (m > 0).
inline BigInt floor_mod(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

inline std::uint64_t floor_mod(std::int64_t a, std::uint64_t m) {
  if (a >= 0) return static_cast<std::uint64_t>(a) % m;
  // -(a+1) never overflows
  const std::uint64_t r = static_cast<std::uint64_t>(-(a + 1)) % m;
  return m - 1 - r;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d <= n / d; ++d)
    if (n % d == 0) return false;
  return true;
}

/// "num/den", or just "num" for integers.
inline std::string rational_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace padicspec
