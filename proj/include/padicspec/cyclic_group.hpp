#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "padicspec/arith.hpp"
#include "padicspec/cyclotomic.hpp"
#include "padicspec/set_model.hpp"

namespace padicspec {

/// Nonempty subset of Z/p^gamma Z.
class DigitSet {
 public:
  using Bits = boost::dynamic_bitset<>;

  /// Elements must lie in [0, p^gamma); repeats are ignored.
  DigitSet(std::uint64_t p, unsigned gamma, std::vector<std::uint64_t> elements)
      : p_(p), gamma_(gamma), modulus_(ipow(p, gamma)) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (modulus_ > (std::uint64_t{1} << 26)) throw std::length_error("group Z/p^gamma too large for a bitset");
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    if (elements.empty()) throw std::invalid_argument("digit set must be nonempty");
    if (elements.back() >= modulus_)
      throw std::out_of_range("element " + std::to_string(elements.back()) + " outside Z/" + std::to_string(modulus_));
    elements_ = std::move(elements);
  }

  /// Bit c of mask set iff c is in the set.
  static DigitSet from_mask(std::uint64_t p, unsigned gamma, std::uint64_t mask) {
    std::vector<std::uint64_t> el;
    for (unsigned c = 0; c < 64; ++c)
      if ((mask >> c) & 1u) el.push_back(c);
    return DigitSet(p, gamma, std::move(el));
  }

  std::uint64_t p() const { return p_; }
  unsigned gamma() const { return gamma_; }
  std::uint64_t modulus() const { return modulus_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<std::uint64_t>& elements() const { return elements_; }

  bool contains(std::uint64_t x) const { return std::binary_search(elements_.begin(), elements_.end(), x); }

  Bits bits() const {
    Bits b(modulus_);
    for (std::uint64_t c : elements_) b.set(c);
    return b;
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < elements_.size(); ++i) s += (i ? "," : "") + std::to_string(elements_[i]);
    return s + "} in Z/" + std::to_string(p_) + "^" + std::to_string(gamma_);
  }

  friend bool operator==(const DigitSet& a, const DigitSet& b) {
    return a.p_ == b.p_ && a.gamma_ == b.gamma_ && a.elements_ == b.elements_;
  }

 private:
  std::uint64_t p_;
  unsigned gamma_;
  std::uint64_t modulus_;
  std::vector<std::uint64_t> elements_;
};

inline PTree build_tree(const DigitSet& c) { return build_tree(c.p(), c.gamma(), c.elements()); }

/// sum over t in C of exp(-2 pi i k t / p^gamma), at cyclotomic level gamma.
inline GroupRingElement fourier_sum(const DigitSet& c, std::uint64_t k) {
  std::vector<std::int64_t> ex;
  ex.reserve(c.size());
  const auto m = static_cast<u128>(c.modulus());
  for (std::uint64_t t : c.elements()) {
    const auto kt = static_cast<std::uint64_t>((static_cast<u128>(k) * t) % m);
    ex.push_back(kt == 0 ? 0 : static_cast<std::int64_t>(c.modulus() - kt));
  }
  return GroupRingElement::from_exponents(c.p(), c.gamma(), ex);
}

/// All ell in [0, gamma) with 1^_C(p^ell) = 0, ascending.
inline std::vector<unsigned> fourier_zero_powers(const DigitSet& c) {
  std::vector<unsigned> out;
  for (unsigned ell = 0; ell < c.gamma(); ++ell) {
    const unsigned level = c.gamma() - ell;
    const std::uint64_t m = ipow(c.p(), level);
    std::vector<std::int64_t> ex;
    ex.reserve(c.size());
    for (std::uint64_t t : c.elements()) ex.push_back(-static_cast<std::int64_t>(t % m));
    if (GroupRingElement::from_exponents(c.p(), level, ex).is_zero()) out.push_back(ell);
  }
  return out;
}

/// Bit k set iff 1^_C(k) = 0, over every frequency k in Z/p^gamma Z.
inline DigitSet::Bits fourier_zero_set(const DigitSet& c) {
  DigitSet::Bits z(c.modulus());
  for (std::uint64_t k = 0; k < c.modulus(); ++k)
    if (fourier_sum(c, k).is_zero()) z.set(k);
  return z;
}

/// Whether C + T hits every residue exactly once.
inline bool is_direct_sum(const DigitSet& c, const std::vector<std::uint64_t>& t) {
  const std::uint64_t n = c.modulus();
  if (static_cast<u128>(c.size()) * t.size() != n) return false;
  DigitSet::Bits seen(n);
  for (std::uint64_t b : t)
    for (std::uint64_t a : c.elements()) {
      const std::uint64_t x = (a + b % n) % n;
      if (seen.test(x)) return false;
      seen.set(x);
    }
  return true;
}

/// Whether Lambda has #C elements with every nonzero difference in the zero set.
inline bool is_spectrum(const DigitSet& c, const std::vector<std::uint64_t>& lambda, const DigitSet::Bits& zeros) {
  if (lambda.size() != c.size()) return false;
  const std::uint64_t n = c.modulus();
  for (std::size_t i = 0; i < lambda.size(); ++i)
    for (std::size_t j = 0; j < lambda.size(); ++j) {
      if (i == j) continue;
      const std::uint64_t d = (lambda[i] % n + n - lambda[j] % n) % n;
      if (d == 0 || !zeros.test(d)) return false;
    }
  return true;
}

inline bool is_spectrum(const DigitSet& c, const std::vector<std::uint64_t>& lambda) {
  return is_spectrum(c, lambda, fourier_zero_set(c));
}

namespace detail {

// Exact cover of Z/n by translates of C. The translate by 0 goes first, then the
// smallest uncovered residue x is covered by each candidate x - a in turn.
class TileSearch {
 public:
  explicit TileSearch(const DigitSet& c) : c_(c), n_(c.modulus()) {
    translates_.reserve(n_);
    for (std::uint64_t t = 0; t < n_; ++t) {
      DigitSet::Bits b(n_);
      for (std::uint64_t a : c.elements()) b.set((a + t) % n_);
      translates_.push_back(std::move(b));
    }
  }

  std::optional<std::vector<std::uint64_t>> run() {
    covered_ = translates_[0];
    chosen_ = {0};
    if (!extend(0)) return std::nullopt;
    std::vector<std::uint64_t> out = chosen_;
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  bool extend(std::uint64_t from) {
    std::uint64_t x = from;
    while (x < n_ && covered_.test(x)) ++x;
    if (x == n_) return true;
    for (std::uint64_t a : c_.elements()) {
      const std::uint64_t t = (x + n_ - a) % n_;
      if (translates_[t].intersects(covered_)) continue;
      covered_ |= translates_[t];
      chosen_.push_back(t);
      if (extend(x + 1)) return true;
      chosen_.pop_back();
      covered_ ^= translates_[t];
    }
    return false;
  }

  const DigitSet& c_;
  std::uint64_t n_;
  std::vector<DigitSet::Bits> translates_;
  DigitSet::Bits covered_;
  std::vector<std::uint64_t> chosen_;
};

// Clique of a given size containing 0 in the difference graph of a symmetric set.
class CliqueSearch {
 public:
  CliqueSearch(std::uint64_t n, const DigitSet::Bits& zeros) : n_(n) {
    adj_.assign(n, DigitSet::Bits(n));
    for (std::uint64_t u = 0; u < n; ++u)
      for (std::uint64_t v = 0; v < n; ++v)
        if (u != v && zeros.test((v + n - u) % n)) adj_[u].set(v);
  }

  std::optional<std::vector<std::uint64_t>> run(std::size_t target) {
    target_ = target;
    clique_ = {0};
    if (!extend(adj_[0])) return std::nullopt;
    return clique_;
  }

 private:
  bool extend(DigitSet::Bits candidates) {
    if (clique_.size() == target_) return true;
    for (auto v = candidates.find_first(); v != DigitSet::Bits::npos; v = candidates.find_next(v)) {
      if (clique_.size() + candidates.count() < target_) return false;
      clique_.push_back(v);
      if (extend(candidates & adj_[v])) return true;
      clique_.pop_back();
      candidates.reset(v);
    }
    return false;
  }

  std::uint64_t n_;
  std::size_t target_ = 0;
  std::vector<DigitSet::Bits> adj_;
  std::vector<std::uint64_t> clique_;
};

}  // namespace detail

/// A tiling complement T with 0 in T, sorted, or nullopt when none exists.
inline std::optional<std::vector<std::uint64_t>> brute_force_tile(const DigitSet& c) {
  return detail::TileSearch(c).run();
}

/// A spectrum Lambda (frequencies k, characters x -> exp(2 pi i k x / p^gamma))
/// with 0 in Lambda, sorted, or nullopt when none exists.
inline std::optional<std::vector<std::uint64_t>> brute_force_spectrum(const DigitSet& c,
                                                                      const DigitSet::Bits& zeros) {
  return detail::CliqueSearch(c.modulus(), zeros).run(c.size());
}

inline std::optional<std::vector<std::uint64_t>> brute_force_spectrum(const DigitSet& c) {
  return brute_force_spectrum(c, fourier_zero_set(c));
}

/// Frequencies sum_{i in I} b_i p^{gamma-1-i}: the canonical spectrum scaled by p^gamma.
inline std::vector<std::uint64_t> canonical_frequencies(std::uint64_t p, unsigned gamma, const std::vector<unsigned>& I) {
  std::vector<std::uint64_t> out{0};
  for (unsigned i : I) {
    const std::uint64_t step = ipow(p, gamma - 1 - i);
    const std::size_t base = out.size();
    for (std::uint64_t b = 1; b < p; ++b)
      for (std::size_t k = 0; k < base; ++k) out.push_back(out[k] + b * step);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// sum_{j in J} a_j p^j: the canonical tiling complement in Z/p^gamma Z.
inline std::vector<std::uint64_t> canonical_translates(std::uint64_t p, const std::vector<unsigned>& J) {
  std::vector<std::uint64_t> out{0};
  for (unsigned j : J) {
    const std::uint64_t step = ipow(p, j);
    const std::size_t base = out.size();
    for (std::uint64_t a = 1; a < p; ++a)
      for (std::size_t k = 0; k < base; ++k) out.push_back(out[k] + a * step);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Classification of a subset of Z/p^gamma Z.
///
/// The fast path answers spectral = tile = homogeneous with canonical
/// witnesses. Every other characterization computed is compared against it;
/// mismatches are listed in disagreements and clear `consistent`.
struct Verdict {
  explicit Verdict(DigitSet s) : set(std::move(s)) {}

  DigitSet set;
  bool homogeneous = false;
  bool spectral = false;
  bool tile = false;
  std::vector<unsigned> zero_powers;
  std::vector<unsigned> I;
  std::vector<unsigned> J;
  std::optional<std::vector<std::uint64_t>> spectrum;
  std::optional<std::vector<std::uint64_t>> complement;

  bool oracles_run = false;
  std::optional<std::vector<std::uint64_t>> oracle_spectrum;
  std::optional<std::vector<std::uint64_t>> oracle_complement;

  bool consistent = true;
  std::vector<std::string> disagreements;

  bool oracle_spectral() const { return oracle_spectrum.has_value(); }
  bool oracle_tile() const { return oracle_complement.has_value(); }

  /// Human-readable counterexample report.
  std::string dump() const {
    std::ostringstream os;
    os << "set " << set.to_string() << ": homogeneous=" << homogeneous << " spectral=" << spectral
       << " tile=" << tile;
    if (oracles_run) os << " oracle_spectral=" << oracle_spectral() << " oracle_tile=" << oracle_tile();
    for (const auto& d : disagreements) os << "\n  " << d;
    return os.str();
  }
};

inline Verdict classify(const DigitSet& c, bool use_oracles) {
  Verdict v{c};
  const PTree tree = build_tree(c);
  const Homogeneity walk = detail::homogeneity_by_walk(tree);
  const bool counted = detail::homogeneity_by_counting(tree);
  auto disagree = [&v](std::string what) {
    v.consistent = false;
    v.disagreements.push_back(std::move(what));
  };

  v.homogeneous = walk.homogeneous;
  v.spectral = v.tile = v.homogeneous;
  v.I = walk.I;
  v.J = walk.J;
  v.zero_powers = fourier_zero_powers(c);
  if (counted != walk.homogeneous) disagree("level counting gives homogeneous=" + std::to_string(counted));

  const bool zero_count = static_cast<u128>(ipow(c.p(), static_cast<unsigned>(v.zero_powers.size()))) ==
                          c.size();
  if (zero_count != walk.homogeneous) disagree("p^#zero_powers == #C is " + std::to_string(zero_count));
  if (walk.homogeneous) {
    std::vector<unsigned> expect;
    for (unsigned i : walk.I) expect.push_back(c.gamma() - 1 - i);
    std::sort(expect.begin(), expect.end());
    if (expect != v.zero_powers) disagree("zero powers do not mirror the branching levels");
  }

  std::optional<DigitSet::Bits> zeros;
  if (walk.homogeneous || use_oracles) zeros = fourier_zero_set(c);
  if (walk.homogeneous) {
    v.spectrum = canonical_frequencies(c.p(), c.gamma(), walk.I);
    v.complement = canonical_translates(c.p(), walk.J);
    if (!is_spectrum(c, *v.spectrum, *zeros)) disagree("canonical frequencies fail orthogonality");
    if (!is_direct_sum(c, *v.complement)) disagree("canonical translates fail exact cover");
  }

  if (use_oracles) {
    v.oracles_run = true;
    v.oracle_complement = brute_force_tile(c);
    v.oracle_spectrum = brute_force_spectrum(c, *zeros);
    if (v.oracle_tile() != v.tile) disagree("exact-cover search gives tile=" + std::to_string(v.oracle_tile()));
    if (v.oracle_spectral() != v.spectral)
      disagree("clique search gives spectral=" + std::to_string(v.oracle_spectral()));
    if (v.oracle_complement && !is_direct_sum(c, *v.oracle_complement)) disagree("oracle complement is not exact");
    if (v.oracle_spectrum && !is_spectrum(c, *v.oracle_spectrum, *zeros)) disagree("oracle spectrum not orthogonal");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// Every nonempty subset of Z/p^gamma Z in increasing bitmask order.
class SubsetEnumerator {
 public:
  SubsetEnumerator(std::uint64_t p, unsigned gamma) : p_(p), gamma_(gamma), n_(ipow(p, gamma)) {
    if (n_ > 63) throw std::length_error("exhaustive subset enumeration needs p^gamma <= 63");
    end_ = std::uint64_t{1} << n_;
  }

  std::uint64_t total() const { return end_ - 1; }

  std::optional<DigitSet> next() {
    if (mask_ >= end_) return std::nullopt;
    return DigitSet::from_mask(p_, gamma_, mask_++);
  }

 private:
  std::uint64_t p_;
  unsigned gamma_;
  std::uint64_t n_;
  std::uint64_t mask_ = 1;
  std::uint64_t end_;
};

/// Digit chosen at level j for the vertex with residue prefix mod p^j.
using DigitChoice = std::function<unsigned(unsigned level, std::uint64_t prefix)>;

/// The T_{I,J}-form set whose tree branches fully at levels in I and takes
/// choice(j, prefix) at every other level j < gamma.
inline DigitSet tij_set(std::uint64_t p, unsigned gamma, const std::vector<unsigned>& I, const DigitChoice& choice) {
  std::vector<std::uint64_t> level{0};
  std::uint64_t scale = 1;
  for (unsigned n = 0; n < gamma; ++n) {
    const bool full = std::find(I.begin(), I.end(), n) != I.end();
    std::vector<std::uint64_t> next;
    for (std::uint64_t v : level) {
      if (full) {
        for (std::uint64_t d = 0; d < p; ++d) next.push_back(v + d * scale);
      } else {
        const unsigned d = choice(n, v);
        if (d >= p) throw std::out_of_range("digit choice " + std::to_string(d) + " at level " + std::to_string(n));
        next.push_back(v + d * scale);
      }
    }
    std::sort(next.begin(), next.end());
    level = std::move(next);
    scale *= p;
  }
  return DigitSet(p, gamma, std::move(level));
}

/// Number of T_{I,J}-form sets: p^{sum_{j in J} p^{#(I cap [0,j))}}.
inline BigInt tij_count(std::uint64_t p, unsigned gamma, const std::vector<unsigned>& I) {
  BigInt exponent = 0;
  unsigned below = 0;
  for (unsigned n = 0; n < gamma; ++n) {
    if (std::find(I.begin(), I.end(), n) != I.end()) {
      ++below;
    } else {
      exponent += big_pow(p, below);
    }
  }
  if (exponent > 1u << 20) throw std::overflow_error("T_{I,J} count too large to represent");
  return big_pow(p, static_cast<unsigned>(exponent));
}

/// Streams every T_{I,J}-form set without repeats.
///
/// The state is one digit per (level j in J, vertex at level j), vertices
/// indexed in increasing residue order; it advances like an odometer whose
/// most significant wheel is the lowest level.
class TIJEnumerator {
 public:
  TIJEnumerator(std::uint64_t p, unsigned gamma, std::vector<unsigned> I) : p_(p), gamma_(gamma), I_(std::move(I)) {
    std::sort(I_.begin(), I_.end());
    I_.erase(std::unique(I_.begin(), I_.end()), I_.end());
    if (!I_.empty() && I_.back() >= gamma) throw std::out_of_range("branching level outside [0, gamma)");
    (void)ipow(p, gamma);  // overflow check
    unsigned below = 0;
    for (unsigned n = 0; n < gamma; ++n) {
      if (std::binary_search(I_.begin(), I_.end(), n)) {
        ++below;
      } else {
        J_.push_back(n);
        digits_.emplace_back(ipow(p, below), 0u);
      }
    }
  }

  const std::vector<unsigned>& I() const { return I_; }
  const std::vector<unsigned>& J() const { return J_; }

  std::optional<DigitSet> next() {
    if (done_) return std::nullopt;
    DigitSet out = build();
    advance();
    return out;
  }

 private:
  DigitSet build() const {
    std::vector<std::uint64_t> level{0};
    std::uint64_t scale = 1;
    std::size_t j = 0;
    for (unsigned n = 0; n < gamma_; ++n) {
      std::vector<std::uint64_t> next;
      if (j < J_.size() && J_[j] == n) {
        for (std::size_t k = 0; k < level.size(); ++k) next.push_back(level[k] + digits_[j][k] * scale);
        ++j;
      } else {
        for (std::uint64_t v : level)
          for (std::uint64_t d = 0; d < p_; ++d) next.push_back(v + d * scale);
      }
      std::sort(next.begin(), next.end());
      level = std::move(next);
      scale *= p_;
    }
    return DigitSet(p_, gamma_, std::move(level));
  }

  void advance() {
    for (std::size_t j = digits_.size(); j-- > 0;) {
      for (std::size_t k = digits_[j].size(); k-- > 0;) {
        if (++digits_[j][k] < p_) return;
        digits_[j][k] = 0;
      }
    }
    done_ = true;
  }

  std::uint64_t p_;
  unsigned gamma_;
  std::vector<unsigned> I_;
  std::vector<unsigned> J_;
  std::vector<std::vector<unsigned>> digits_;
  bool done_ = false;
};

}  // namespace padicspec
