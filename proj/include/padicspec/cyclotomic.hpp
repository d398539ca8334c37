#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "padicspec/arith.hpp"

namespace padicspec {

/// Integer combination sum_e coeff[e] * exp(2 pi i e / p^n) of p^n-th roots of
/// unity, i.e. an element of the group ring Z[Z/p^n Z].
///
/// Terms are kept sorted by exponent with no zero coefficients, so equality of
/// representations is equality of group-ring elements (not of complex values;
/// use is_zero on a difference for that).
class GroupRingElement {
 public:
  using Term = std::pair<std::uint64_t, BigInt>;

  GroupRingElement(std::uint64_t p, unsigned level)
      : p_(p), level_(level), modulus_(ipow(p, level)) {
    if (p < 2) throw std::invalid_argument("group ring needs p >= 2");
  }

  /// Exponents are reduced mod p^n and multiplicities accumulated.
  static GroupRingElement from_exponents(std::uint64_t p, unsigned level,
                                         std::span<const std::int64_t> exponents) {
    GroupRingElement z(p, level);
    std::vector<Term> raw;
    raw.reserve(exponents.size());
    for (std::int64_t e : exponents) raw.emplace_back(floor_mod(e, z.modulus_), BigInt(1));
    z.assign(std::move(raw));
    return z;
  }

  static GroupRingElement from_exponents(std::uint64_t p, unsigned level,
                                         std::initializer_list<std::int64_t> exponents) {
    return from_exponents(p, level, std::span<const std::int64_t>(exponents.begin(), exponents.size()));
  }

  /// Exponents must already lie in [0, p^n); duplicates are summed.
  static GroupRingElement from_terms(std::uint64_t p, unsigned level, std::vector<Term> terms) {
    GroupRingElement z(p, level);
    for (const auto& [e, c] : terms)
      if (e >= z.modulus_) throw std::out_of_range("exponent " + std::to_string(e) + " outside Z/p^n");
    z.assign(std::move(terms));
    return z;
  }

  static GroupRingElement monomial(std::uint64_t p, unsigned level, std::uint64_t e, const BigInt& c) {
    return from_terms(p, level, {{e % ipow(p, level), c}});
  }

  std::uint64_t p() const { return p_; }
  unsigned level() const { return level_; }
  std::uint64_t modulus() const { return modulus_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  BigInt coeff(std::uint64_t e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, std::uint64_t x) { return t.first < x; });
    return (it != terms_.end() && it->first == e) ? it->second : BigInt(0);
  }

  /// Whether the represented complex number is exactly zero.
  ///
  /// For n >= 1 the vanishing combinations form the Z-module spanned by the
  /// fibers {r + j p^{n-1} : 0 <= j < p}, and these fibers are a basis; so the
  /// value is zero iff the coefficient is constant along every fiber.
  bool is_zero() const {
    if (level_ == 0) return terms_.empty();
    const std::uint64_t stride = modulus_ / p_;
    if (stride <= (1u << 16)) {
      std::vector<const BigInt*> value(stride, nullptr);
      std::vector<std::uint32_t> count(stride, 0);
      for (const auto& [e, c] : terms_) {
        const std::uint64_t r = e % stride;
        if (value[r] == nullptr) {
          value[r] = &c;
        } else if (*value[r] != c) {
          return false;
        }
        ++count[r];
      }
      for (std::uint64_t r = 0; r < stride; ++r)
        if (count[r] != 0 && count[r] != p_) return false;
      return true;
    }
    std::unordered_map<std::uint64_t, std::pair<const BigInt*, std::uint64_t>> fibers;
    for (const auto& [e, c] : terms_) {
      auto [it, fresh] = fibers.try_emplace(e % stride, &c, 0);
      if (!fresh && *it->second.first != c) return false;
      ++it->second.second;
    }
    for (const auto& [r, entry] : fibers)
      if (entry.second != p_) return false;
    return true;
  }

  friend GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b) {
    a.check_compatible(b);
    std::vector<Term> merged;
    merged.reserve(a.terms_.size() + b.terms_.size());
    merged.insert(merged.end(), a.terms_.begin(), a.terms_.end());
    merged.insert(merged.end(), b.terms_.begin(), b.terms_.end());
    GroupRingElement z(a.p_, a.level_);
    z.assign(std::move(merged));
    return z;
  }

  GroupRingElement operator-() const {
    GroupRingElement z = *this;
    for (auto& t : z.terms_) t.second = -t.second;
    return z;
  }

  friend GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b) { return a + (-b); }

  /// Convolution of exponents mod p^n.
  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
    a.check_compatible(b);
    const std::uint64_t m = a.modulus_;
    std::vector<Term> out;
    if (m <= (1u << 16)) {
      std::vector<BigInt> dense(m);
      std::vector<bool> touched(m, false);
      for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
          const std::uint64_t e = add_mod(ea, eb, m);
          dense[e] += ca * cb;
          touched[e] = true;
        }
      for (std::uint64_t e = 0; e < m; ++e)
        if (touched[e] && dense[e] != 0) out.emplace_back(e, std::move(dense[e]));
    } else {
      std::map<std::uint64_t, BigInt> acc;
      for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) acc[add_mod(ea, eb, m)] += ca * cb;
      for (auto& [e, c] : acc)
        if (c != 0) out.emplace_back(e, std::move(c));
    }
    GroupRingElement z(a.p_, a.level_);
    z.terms_ = std::move(out);
    return z;
  }

  /// Complex conjugate: exponents negated mod p^n.
  GroupRingElement conj() const {
    std::vector<Term> raw;
    raw.reserve(terms_.size());
    for (const auto& [e, c] : terms_) raw.emplace_back(e == 0 ? 0 : modulus_ - e, c);
    GroupRingElement z(p_, level_);
    z.assign(std::move(raw));
    return z;
  }

  /// z * conj(z), the element whose value is |z|^2.
  GroupRingElement norm_squared() const { return *this * conj(); }

  /// Multiply every exponent by a unit x (p does not divide x).
  GroupRingElement rotate(std::int64_t x_unit) const {
    if (x_unit % static_cast<std::int64_t>(p_) == 0)
      throw std::invalid_argument("rotation factor " + std::to_string(x_unit) + " is divisible by p");
    const std::uint64_t x = floor_mod(x_unit, modulus_);
    std::vector<Term> raw;
    raw.reserve(terms_.size());
    for (const auto& [e, c] : terms_) raw.emplace_back(mul_mod(e, x, modulus_), c);
    GroupRingElement z(p_, level_);
    z.assign(std::move(raw));
    return z;
  }

  /// The same complex value written at a finer level n' >= n (exponent e -> e p^{n'-n}).
  GroupRingElement lift(unsigned new_level) const {
    if (new_level < level_) throw std::invalid_argument("cannot lift to a coarser level");
    const std::uint64_t f = ipow(p_, new_level - level_);
    GroupRingElement z(p_, new_level);
    z.terms_.reserve(terms_.size());
    for (const auto& [e, c] : terms_) z.terms_.emplace_back(e * f, c);
    return z;
  }

  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) {
    return a.p_ == b.p_ && a.level_ == b.level_ && a.terms_ == b.terms_;
  }

 private:
  static std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<u128>(a) + b) % m);
  }
  static std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % m);
  }

  void check_compatible(const GroupRingElement& o) const {
    if (p_ != o.p_ || level_ != o.level_)
      throw std::invalid_argument("incompatible cyclotomic levels: (" + std::to_string(p_) + "," +
                                  std::to_string(level_) + ") vs (" + std::to_string(o.p_) + "," +
                                  std::to_string(o.level_) + ")");
  }

  void assign(std::vector<Term> raw) {
    std::sort(raw.begin(), raw.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    terms_.clear();
    for (auto& t : raw) {
      if (!terms_.empty() && terms_.back().first == t.first) {
        terms_.back().second += t.second;
      } else {
        terms_.push_back(std::move(t));
      }
    }
    std::erase_if(terms_, [](const Term& t) { return t.second == 0; });
  }

  std::uint64_t p_;
  unsigned level_;
  std::uint64_t modulus_;
  std::vector<Term> terms_;
};

/// Splits a vanishing 0/1 combination into disjoint p-element vanishing pieces.
///
/// Greedy: take the smallest unused exponent and complete its fiber. Pieces come
/// out ordered by their smallest exponent, each sorted ascending.
inline std::vector<std::vector<std::uint64_t>> decompose_zero_sum(const GroupRingElement& z) {
  for (const auto& [e, c] : z.terms())
    if (c != 1) throw std::invalid_argument("decompose_zero_sum needs 0/1 coefficients");
  if (!z.is_zero()) throw std::invalid_argument("decompose_zero_sum needs a vanishing sum");
  std::vector<std::vector<std::uint64_t>> pieces;
  if (z.level() == 0) return pieces;  // vanishing at level 0 means empty
  const std::uint64_t stride = z.modulus() / z.p();
  std::vector<std::uint64_t> remaining;
  for (const auto& t : z.terms()) remaining.push_back(t.first);
  std::vector<bool> used(remaining.size(), false);
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    if (used[i]) continue;
    const std::uint64_t r = remaining[i] % stride;
    std::vector<std::uint64_t> piece;
    for (std::uint64_t j = 0; j < z.p(); ++j) {
      const std::uint64_t e = r + j * stride;
      auto it = std::lower_bound(remaining.begin(), remaining.end(), e);
      used[static_cast<std::size_t>(it - remaining.begin())] = true;
      piece.push_back(e);
    }
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

}  // namespace padicspec
