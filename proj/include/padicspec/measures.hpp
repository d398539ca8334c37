#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "padicspec/arith.hpp"
#include "padicspec/cyclic_group.hpp"
#include "padicspec/cyclotomic.hpp"
#include "padicspec/padic.hpp"
#include "padicspec/set_model.hpp"

namespace padicspec {

/// Uniform probability measure on finitely many distinct points.
class FinitePointMeasure {
 public:
  explicit FinitePointMeasure(std::vector<PAdic> points) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("point measure needs at least one point");
    std::sort(points_.begin(), points_.end());
    if (std::adjacent_find(points_.begin(), points_.end()) != points_.end())
      throw std::invalid_argument("point measure support has repeated points");
    for (const PAdic& x : points_)
      if (!(x.context() == points_.front().context())) throw std::invalid_argument("points over different primes");
  }

  const std::vector<PAdic>& points() const { return points_; }
  const PrimeContext& context() const { return points_.front().context(); }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<PAdic> points_;
};

/// Set of v_p(c - c') over distinct pairs.
inline std::set<std::int64_t> admissible_orders_F(const FinitePointMeasure& f) {
  std::set<std::int64_t> out;
  const auto& pts = f.points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) out.insert((pts[i] - pts[j]).exponent());
  return out;
}

/// max v_p(c - c'); needs at least two points.
inline std::int64_t gamma_F(const FinitePointMeasure& f) {
  if (f.size() < 2) throw std::invalid_argument("gamma_F needs at least two points");
  return *admissible_orders_F(f).rbegin();
}

/// #F = p^{#I_F}.
inline bool is_spectral_finite(const FinitePointMeasure& f) {
  const std::size_t k = admissible_orders_F(f).size();
  return k < 64 && BigInt(f.size()) == big_pow(f.context().p(), static_cast<unsigned>(k));
}

/// Homogeneity of the union of balls B(c, p^{-gamma0}) over c in F.
inline bool fattened_homogeneous(const FinitePointMeasure& f, std::int64_t gamma0) {
  std::vector<Ball> balls;
  for (const PAdic& c : f.points()) balls.push_back(Ball{c, -gamma0});
  return is_p_homogeneous(normalize(f.context(), balls)).homogeneous;
}

/// (1/#F) sum_{c in F} chi(-c xi), as scalar times a root-of-unity sum.
inline FourierValue measure_fourier(const FinitePointMeasure& f, const PAdic& xi) {
  FourierValue out;
  out.in_support = true;
  out.scalar = Rational(1) / Rational(static_cast<long long>(f.size()));
  std::vector<PAdic> phases;
  std::int64_t level = 0;
  for (const PAdic& c : f.points()) {
    PAdic t = -(c * xi);
    if (!t.is_zero()) level = std::max(level, -t.exponent());
    phases.push_back(std::move(t));
  }
  std::vector<GroupRingElement::Term> terms;
  for (const PAdic& t : phases) terms.emplace_back(t.character_index(static_cast<unsigned>(level)), BigInt(1));
  out.sum = GroupRingElement::from_terms(f.context().p(), static_cast<unsigned>(level), std::move(terms));
  return out;
}

// ---------------------------------------------------------------------------
// Singular measures
// ---------------------------------------------------------------------------

/// Partition I ⊔ J of the levels 0, 1, 2, ... with an eventually periodic I,
/// and a rule choosing the digit at each J level.
///
/// Bit strings are read level by level: '1' puts the level in I. Levels below
/// preperiod.size() use the preperiod; later ones cycle through period.
class SingularMeasureSpec {
 public:
  enum class Choice { zero, repeat, table };

  SingularMeasureSpec(PrimeContext ctx, std::string preperiod, std::string period, Choice choice = Choice::zero,
                      std::map<std::pair<unsigned, std::uint64_t>, unsigned> table = {})
      : ctx_(ctx), preperiod_(std::move(preperiod)), period_(std::move(period)), choice_(choice),
        table_(std::move(table)) {
    auto bits_ok = [](const std::string& s) {
      return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
    };
    if (!bits_ok(preperiod_) || !bits_ok(period_)) throw std::invalid_argument("level masks must be strings of 0 and 1");
    if (period_.find('1') == std::string::npos || period_.find('0') == std::string::npos)
      throw std::invalid_argument("period must put infinitely many levels in both I and J");
    for (const auto& [key, d] : table_)
      if (d >= ctx.p()) throw std::invalid_argument("digit choice " + std::to_string(d) + " is not below p");
  }

  /// Named presets: "example1" (p = 2) and "example2" (p = 3), both with
  /// I = {0, 2} mod 3 and t_1 = t_0 style repetition.
  static SingularMeasureSpec preset(const std::string& name) {
    if (name == "example1") return SingularMeasureSpec(PrimeContext(2), "", "101", Choice::repeat);
    if (name == "example2") return SingularMeasureSpec(PrimeContext(3), "", "101", Choice::repeat);
    throw std::invalid_argument("unknown preset '" + name + "'");
  }

  const PrimeContext& context() const { return ctx_; }
  std::uint64_t p() const { return ctx_.p(); }
  const std::string& preperiod() const { return preperiod_; }
  const std::string& period() const { return period_; }
  Choice choice() const { return choice_; }
  const std::map<std::pair<unsigned, std::uint64_t>, unsigned>& table() const { return table_; }

  bool in_I(unsigned n) const {
    if (n < preperiod_.size()) return preperiod_[n] == '1';
    return period_[(n - preperiod_.size()) % period_.size()] == '1';
  }

  std::vector<unsigned> I_below(unsigned gamma) const {
    std::vector<unsigned> out;
    for (unsigned n = 0; n < gamma; ++n)
      if (in_I(n)) out.push_back(n);
    return out;
  }

  /// Digit at J level j below the vertex with residue prefix mod p^j.
  unsigned digit(unsigned j, std::uint64_t prefix) const {
    switch (choice_) {
      case Choice::zero: return 0;
      case Choice::repeat: return j == 0 ? 0 : static_cast<unsigned>((prefix / ipow(p(), j - 1)) % p());
      case Choice::table: {
        auto it = table_.find({j, prefix});
        return it == table_.end() ? 0 : it->second;
      }
    }
    return 0;
  }

 private:
  PrimeContext ctx_;
  std::string preperiod_;
  std::string period_;
  Choice choice_;
  std::map<std::pair<unsigned, std::uint64_t>, unsigned> table_;
};

struct Truncation {
  DigitSet digits;
  CompactOpenSet omega;
};

/// C_{I_gamma, J_gamma} and Omega_gamma = ⊔_{c in C}(c + p^gamma Z_p).
inline Truncation truncate(const SingularMeasureSpec& spec, unsigned gamma) {
  DigitSet c = tij_set(spec.p(), gamma, spec.I_below(gamma),
                       [&spec](unsigned j, std::uint64_t prefix) { return spec.digit(j, prefix); });
  CompactOpenSet omega = from_digits(spec.context(), gamma, c.elements());
  return Truncation{std::move(c), std::move(omega)};
}

/// Maps f_c(x) = p^gamma x + c for c in a digit set.
struct IFSMaps {
  std::uint64_t p;
  unsigned gamma;
  std::vector<std::uint64_t> digits;
};

inline IFSMaps ifs_maps(const SingularMeasureSpec& spec, unsigned gamma) {
  return IFSMaps{spec.p(), gamma, truncate(spec, gamma).digits.elements()};
}

/// Every d-fold composition applied to 0: {sum_{k<d} c_k p^{k gamma}}.
inline std::vector<std::uint64_t> ifs_orbit(const IFSMaps& maps, unsigned depth) {
  std::vector<std::uint64_t> pts{0};
  std::uint64_t scale = 1;
  const std::uint64_t block = ipow(maps.p, maps.gamma);
  for (unsigned k = 0; k < depth; ++k) {
    std::vector<std::uint64_t> next;
    next.reserve(pts.size() * maps.digits.size());
    for (std::uint64_t x : pts)
      for (std::uint64_t c : maps.digits) next.push_back(x + c * scale);
    pts = std::move(next);
    if (k + 1 < depth) scale = ipow(block, k + 1);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

/// Exact check of sum_{lambda in Lambda_{gamma0}} |sum_{c in C} chi(-c(lambda - xi))|^2 = (#C)^2
/// at every residue xi = k p^{-gamma0}, with Lambda_{gamma0} = {sum_{i in I, i < gamma0} b_i p^{-i-1}}.
inline bool verify_truncation_spectrum(const DigitSet& c, const std::vector<unsigned>& I, unsigned gamma0) {
  if (gamma0 > c.gamma()) throw std::invalid_argument("gamma0 must not exceed gamma");
  const std::uint64_t p = c.p();
  const std::uint64_t n0 = ipow(p, gamma0);
  // lambda and xi both lie in p^{-gamma0} Z_p / Z_p, written as k / p^{gamma0}.
  std::vector<std::uint64_t> lambda{0};
  for (unsigned i : I) {
    if (i >= gamma0) continue;
    const std::uint64_t step = ipow(p, gamma0 - 1 - i);
    const std::size_t base = lambda.size();
    for (std::uint64_t b = 1; b < p; ++b)
      for (std::size_t k = 0; k < base; ++k) lambda.push_back(lambda[k] + b * step);
  }
  const BigInt csq = BigInt(c.size()) * c.size();
  for (std::uint64_t k = 0; k < n0; ++k) {
    GroupRingElement total = GroupRingElement::monomial(p, gamma0, 0, -csq);
    for (std::uint64_t l : lambda) {
      const std::uint64_t diff = (l % n0 + n0 - k) % n0;
      std::vector<std::int64_t> ex;
      ex.reserve(c.size());
      for (std::uint64_t t : c.elements())
        ex.push_back(-static_cast<std::int64_t>(static_cast<std::uint64_t>(
            (static_cast<u128>(t % n0) * diff) % n0)));
      total = total + GroupRingElement::from_exponents(p, gamma0, ex).norm_squared();
    }
    if (!total.is_zero()) return false;
  }
  return true;
}

inline bool verify_truncation_spectrum(const SingularMeasureSpec& spec, unsigned gamma0, unsigned gamma) {
  if (gamma0 > gamma) throw std::invalid_argument("gamma0 must not exceed gamma");
  return verify_truncation_spectrum(truncate(spec, gamma).digits, spec.I_below(gamma), gamma0);
}

}  // namespace padicspec
