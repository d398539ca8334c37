#pragma once

// Reference computations used only by the tests. Each one follows a definition
// directly, with floating point or exhaustive search where that is simplest.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <set>
#include <vector>

#include "padicspec/cyclotomic.hpp"

namespace oracle {

using padicspec::BigInt;
using padicspec::GroupRingElement;

inline std::complex<double> root(std::uint64_t e, std::uint64_t n) {
  return std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(e % n) / static_cast<double>(n));
}

inline std::complex<double> value(const GroupRingElement& z) {
  std::complex<double> s = 0;
  for (const auto& [e, c] : z.terms()) s += static_cast<double>(c) * root(e, z.modulus());
  return s;
}

inline std::int64_t valuation(std::uint64_t x, std::uint64_t p) {
  std::int64_t v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

/// {v_p(c - c')} over distinct pairs of integers in [0, p^gamma).
inline std::set<std::int64_t> pairwise_orders(std::uint64_t p, const std::vector<std::uint64_t>& c) {
  std::set<std::int64_t> out;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      out.insert(valuation(c[i] > c[j] ? c[i] - c[j] : c[j] - c[i], p));
  return out;
}

/// Every root-to-leaf path branches only at levels in the pairwise order set
/// and by at most p, so #C = p^{#orders} exactly when every vertex at those
/// levels branches fully and every other vertex does not branch.
inline bool homogeneous_by_orders(std::uint64_t p, const std::vector<std::uint64_t>& c) {
  std::uint64_t n = 1;
  for (std::size_t k = 0; k < pairwise_orders(p, c).size(); ++k) n *= p;
  return n == c.size();
}

/// sum_{c} exp(2 pi i (-c k) / n).
inline std::complex<double> dft(const std::vector<std::uint64_t>& c, std::uint64_t k, std::uint64_t n) {
  std::complex<double> s = 0;
  for (std::uint64_t x : c) s += root((n - (x * k) % n) % n, n);
  return s;
}

/// Whether C ⊕ T = Z/n with unique representation, by counting.
inline bool direct_sum(const std::vector<std::uint64_t>& c, const std::vector<std::uint64_t>& t, std::uint64_t n) {
  if (c.size() * t.size() != n) return false;
  std::vector<int> hit(n, 0);
  for (std::uint64_t a : c)
    for (std::uint64_t b : t)
      if (++hit[(a + b) % n] > 1) return false;
  return true;
}

/// Whether Λ is a spectrum of C in Z/n: #Λ = #C and pairwise orthogonality.
inline bool orthogonal_basis(const std::vector<std::uint64_t>& c, const std::vector<std::uint64_t>& l, std::uint64_t n) {
  if (c.size() != l.size()) return false;
  for (std::size_t i = 0; i < l.size(); ++i)
    for (std::size_t j = i + 1; j < l.size(); ++j)
      if (std::abs(dft(c, (l[i] + n - l[j]) % n, n)) > 1e-9) return false;
  return true;
}

/// Exhaustive search over all subsets of Z/n (n small).
inline bool has_complement(const std::vector<std::uint64_t>& c, std::uint64_t n) {
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::uint64_t> t;
    for (std::uint64_t x = 0; x < n; ++x)
      if (mask >> x & 1) t.push_back(x);
    if (direct_sum(c, t, n)) return true;
  }
  return false;
}

inline bool has_spectrum(const std::vector<std::uint64_t>& c, std::uint64_t n) {
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::uint64_t> l;
    for (std::uint64_t x = 0; x < n; ++x)
      if (mask >> x & 1) l.push_back(x);
    if (orthogonal_basis(c, l, n)) return true;
  }
  return false;
}

}  // namespace oracle
