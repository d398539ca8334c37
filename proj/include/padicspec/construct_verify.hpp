#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "padicspec/arith.hpp"
#include "padicspec/cyclotomic.hpp"
#include "padicspec/padic.hpp"
#include "padicspec/set_model.hpp"

namespace padicspec {

/// offset + (F ⊕ L_g), where L_g = p^{-g} L and L is the set of fractional
/// parts {x}. Every element of F lies in B(0, p^g), 0 is in F, and elements
/// are distinct; together these make the decomposition f + l unique.
class LatticePeriodicSet {
 public:
  LatticePeriodicSet(PrimeContext ctx, std::int64_t level, std::vector<PAdic> finite)
      : LatticePeriodicSet(ctx, level, std::move(finite), PAdic(ctx)) {}

  LatticePeriodicSet(PrimeContext ctx, std::int64_t level, std::vector<PAdic> finite, PAdic offset)
      : ctx_(ctx), level_(level), finite_(std::move(finite)), offset_(std::move(offset)) {
    std::sort(finite_.begin(), finite_.end());
    for (const PAdic& f : finite_) {
      if (!(f.context() == ctx_)) throw std::invalid_argument("lattice set element over a different prime");
      if (f.valuation() < ExtInt(-level_))
        throw std::invalid_argument("finite part element " + f.to_string() + " lies outside B(0, p^" +
                                    std::to_string(level_) + ")");
    }
    if (std::adjacent_find(finite_.begin(), finite_.end()) != finite_.end())
      throw std::invalid_argument("repeated finite part element breaks unique representation");
    if (!std::binary_search(finite_.begin(), finite_.end(), PAdic(ctx_)))
      throw std::invalid_argument("finite part must contain 0");
  }

  const PrimeContext& context() const { return ctx_; }
  std::uint64_t p() const { return ctx_.p(); }
  std::int64_t level() const { return level_; }
  const std::vector<PAdic>& finite_part() const { return finite_; }
  const PAdic& offset() const { return offset_; }

  LatticePeriodicSet translated(const PAdic& a) const {
    return LatticePeriodicSet(ctx_, level_, finite_, offset_ + a);
  }

  /// Membership: x - offset - f has every digit below -g for some f.
  bool contains(const PAdic& x) const {
    for (const PAdic& f : finite_) {
      const PAdic r = x - offset_ - f;
      if (r.truncate_below(-level_) == r) return true;
    }
    return false;
  }

 private:
  PrimeContext ctx_;
  std::int64_t level_;
  std::vector<PAdic> finite_;
  PAdic offset_;
};

namespace detail {

inline void require_homogeneous(const Homogeneity& h) {
  if (!h.homogeneous) throw std::domain_error("not spectral: set is not p-homogeneous");
}

// Depth of x below the integers: max(0, -v(x)).
inline std::int64_t depth(const PAdic& x) { return x.is_zero() ? 0 : std::max<std::int64_t>(0, -x.exponent()); }

}  // namespace detail

/// {sum_{i in I} b_i p^{-i-1}} ⊕ L_L for the core tree written at level L
/// (default gamma), rescaled by p^{-s}. Every L >= gamma gives the same set.
inline LatticePeriodicSet canonical_spectrum(const CompactOpenSet& omega, std::optional<unsigned> level = {}) {
  const unsigned L = level.value_or(omega.gamma());
  const Homogeneity h = is_p_homogeneous(omega, L);
  detail::require_homogeneous(h);
  const PrimeContext ctx = omega.context();
  std::vector<PAdic> f{PAdic(ctx)};
  for (unsigned i : h.I) {
    const PAdic step = PAdic(ctx, 1).times_p_power(-static_cast<std::int64_t>(i) - 1 - omega.scale());
    const std::size_t base = f.size();
    for (std::uint64_t b = 1; b < omega.p(); ++b)
      for (std::size_t k = 0; k < base; ++k) f.push_back(f[k] + PAdic(ctx, BigInt(b)) * step);
  }
  return LatticePeriodicSet(ctx, static_cast<std::int64_t>(L) + omega.scale(), std::move(f));
}

/// {sum_{j in J} a_j p^j} ⊕ L for the core, rescaled by p^s.
inline LatticePeriodicSet canonical_tiling_complement(const CompactOpenSet& omega) {
  const Homogeneity h = is_p_homogeneous(omega);
  detail::require_homogeneous(h);
  const PrimeContext ctx = omega.context();
  std::vector<PAdic> t{PAdic(ctx)};
  for (unsigned j : h.J) {
    const PAdic step = PAdic(ctx, 1).times_p_power(static_cast<std::int64_t>(j) + omega.scale());
    const std::size_t base = t.size();
    for (std::uint64_t a = 1; a < omega.p(); ++a)
      for (std::size_t k = 0; k < base; ++k) t.push_back(t[k] + PAdic(ctx, BigInt(a)) * step);
  }
  return LatticePeriodicSet(ctx, -omega.scale(), std::move(t));
}

// ---------------------------------------------------------------------------
// Spectral verification
// ---------------------------------------------------------------------------

/// One residue class of frequencies, represented by eta in the coordinates of
/// Omega: the window points of Lambda near eta and the residual
/// sum_lambda |sum_c chi(-c(lambda - eta))|^2 - (#C)^2 in the rescaled core,
/// which must vanish.
struct ResidueCheck {
  PAdic eta;
  std::uint64_t window_points = 0;
  GroupRingElement residual{2, 0};
  bool zero = false;
};

struct SpectralCertificate {
  bool ok = true;
  std::uint64_t p = 2;
  unsigned cyclotomic_level = 0;
  std::int64_t residue_level = 0;
  std::vector<ResidueCheck> checks;
};

namespace detail {

constexpr std::uint64_t kMaxResidues = std::uint64_t{1} << 22;

// Core data: Omega = a + p^s Omega_0 and Lambda rescaled to Omega_0.
struct CoreSpectrum {
  std::int64_t level;
  std::vector<PAdic> points;  // offset + f, times p^s
};

inline CoreSpectrum to_core(const CompactOpenSet& omega, const LatticePeriodicSet& lambda) {
  if (!(lambda.context() == omega.context())) throw std::invalid_argument("set and lattice over different primes");
  CoreSpectrum core{lambda.level() - omega.scale(), {}};
  for (const PAdic& f : lambda.finite_part()) core.points.push_back((lambda.offset() + f).times_p_power(omega.scale()));
  return core;
}

// All zeta = l - d with l in L_g and v(zeta) >= -gamma.
inline std::vector<PAdic> window_offsets(const PAdic& d, std::int64_t g, unsigned gamma) {
  const PrimeContext ctx = d.context();
  const std::int64_t G = static_cast<std::int64_t>(gamma);
  std::vector<PAdic> out;
  if (g >= G) {
    const PAdic zeta = d.truncate_below(-g) - d;
    if (zeta.valuation() >= ExtInt(-G)) out.push_back(zeta);
    return out;
  }
  const PAdic base = d.truncate_below(-G) - d;
  const std::int64_t free = G - g;
  if (free > 40) throw std::length_error("lattice window too large");
  const std::uint64_t count = ipow(ctx.p(), static_cast<unsigned>(free));
  const PAdic step = PAdic(ctx, 1).times_p_power(-G);
  PAdic m(ctx);
  for (std::uint64_t k = 0; k < count; ++k) {
    out.push_back(base + m);
    m += step;
  }
  return out;
}

inline GroupRingElement character_sum(const std::vector<std::uint64_t>& digits, const PAdic& zeta, std::uint64_t p,
                                      unsigned gamma) {
  std::vector<GroupRingElement::Term> terms;
  terms.reserve(digits.size());
  for (std::uint64_t c : digits) {
    const PAdic x = -(PAdic(zeta.context(), BigInt(c)) * zeta);
    terms.emplace_back(x.character_index(gamma), BigInt(1));
  }
  return GroupRingElement::from_terms(p, gamma, std::move(terms));
}

}  // namespace detail

/// Exact check of sum_{lambda in Lambda} |1^_Omega(lambda - xi)|^2 = |Omega|^2.
///
/// Reduction: write Omega = a + p^s Omega_0 and replace Lambda by p^s Lambda,
/// whose lattice level is g - s. The sum is unchanged by xi -> xi + z with
/// z in Z_p (every c is an integer), and after subtracting an element f the
/// digits of xi - f at positions >= -W depend only on the digits of xi in
/// [-W, -1] once W covers the lattice level, gamma and the depth of every
/// f. So the residues eta = k p^{-W}, 0 <= k < p^W, decide the identity.
/// For each residue the window points l in L_g near eta are enumerated
/// exactly, and the identity is tested in the group ring at level gamma.
inline SpectralCertificate verify_spectral_pair(const CompactOpenSet& omega, const LatticePeriodicSet& lambda) {
  const detail::CoreSpectrum core = detail::to_core(omega, lambda);
  const unsigned gamma = omega.gamma();
  const std::uint64_t p = omega.p();
  std::int64_t W = std::max<std::int64_t>(core.level, gamma);
  for (const PAdic& f : core.points) W = std::max(W, detail::depth(f));
  if (W > 40 || ipow(p, static_cast<unsigned>(W)) > detail::kMaxResidues)
    throw std::length_error("too many residues to verify");

  SpectralCertificate cert;
  cert.p = p;
  cert.cyclotomic_level = gamma;
  cert.residue_level = W;
  const BigInt csq = BigInt(omega.digits().size()) * omega.digits().size();
  const std::uint64_t count = ipow(p, static_cast<unsigned>(W));
  const PrimeContext ctx = omega.context();
  for (std::uint64_t k = 0; k < count; ++k) {
    const PAdic eta = PAdic(ctx, BigInt(k)).times_p_power(-W);
    ResidueCheck chk{eta.times_p_power(-omega.scale())};
    GroupRingElement total = GroupRingElement::monomial(p, gamma, 0, -csq);
    for (const PAdic& f : core.points) {
      for (const PAdic& zeta : detail::window_offsets(eta - f, core.level, gamma)) {
        total = total + detail::character_sum(omega.digits(), zeta, p, gamma).norm_squared();
        ++chk.window_points;
      }
    }
    chk.zero = total.is_zero();
    chk.residual = std::move(total);
    cert.ok = cert.ok && chk.zero;
    cert.checks.push_back(std::move(chk));
  }
  return cert;
}

/// #(Lambda ∩ B(a, p^L)) with L the fine level of Omega; constant #C when
/// Lambda is a spectrum.
inline std::uint64_t spectrum_uniform_count(const CompactOpenSet& omega, const LatticePeriodicSet& lambda,
                                            const PAdic& a) {
  const std::int64_t L = omega.fine_level();
  const std::int64_t g = lambda.level();
  std::uint64_t total = 0;
  for (const PAdic& f : lambda.finite_part()) {
    const PAdic d = a - lambda.offset() - f;
    if (g >= L) {
      const PAdic zeta = d.truncate_below(-g) - d;
      if (zeta.valuation() >= ExtInt(-L)) ++total;
    } else {
      total += ipow(omega.p(), static_cast<unsigned>(L - g));
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Tiling verification
// ---------------------------------------------------------------------------

/// One fractional residue r: the integer translates it selects, and the first
/// residue of Z/p^gamma covered other than once (if any).
struct TilingCheck {
  PAdic r;
  std::vector<std::uint64_t> translates;
  std::optional<std::uint64_t> first_failure;
  std::uint32_t multiplicity = 1;
};

struct TilingCertificate {
  bool ok = true;
  std::uint64_t p = 2;
  unsigned gamma = 0;
  std::int64_t residue_level = 0;
  std::vector<TilingCheck> checks;
};

/// Exact check that Omega ⊕ T = Q_p.
///
/// With Omega = a + p^s Omega_0 and T' = p^{-s} T at level g' = g + s, a point
/// x splits into digits below -W, digits r in [-W, -1] and an integer part y.
/// A translate f contributes iff {r - f} has no digit in [-g', -1], and then it
/// covers y exactly when y + floor(r - f) mod p^gamma lies in C. So for every
/// r the selected translates -floor(r - f) must complement C in Z/p^gamma.
/// A negative g' first expands L_{g'} = L ⊕ (integers with digits below -g').
inline TilingCertificate verify_tiling_pair(const CompactOpenSet& omega, const LatticePeriodicSet& tiles) {
  if (!(tiles.context() == omega.context())) throw std::invalid_argument("set and lattice over different primes");
  const PrimeContext ctx = omega.context();
  const std::uint64_t p = omega.p();
  const unsigned gamma = omega.gamma();
  std::int64_t g = tiles.level() + omega.scale();
  std::vector<PAdic> pts;
  for (const PAdic& f : tiles.finite_part()) pts.push_back((tiles.offset() + f).times_p_power(-omega.scale()));
  if (g < 0) {
    if (-g > 40) throw std::length_error("lattice expansion too large");
    const std::uint64_t extra = ipow(p, static_cast<unsigned>(-g));
    if (extra * pts.size() > detail::kMaxResidues) throw std::length_error("lattice expansion too large");
    std::vector<PAdic> expanded;
    for (const PAdic& f : pts)
      for (std::uint64_t d = 0; d < extra; ++d) expanded.push_back(f + PAdic(ctx, BigInt(d)));
    pts = std::move(expanded);
    g = 0;
  }
  std::int64_t W = g;
  for (const PAdic& f : pts) W = std::max(W, detail::depth(f));
  if (W > 40 || ipow(p, static_cast<unsigned>(W)) > detail::kMaxResidues)
    throw std::length_error("too many residues to verify");

  const std::uint64_t n = ipow(p, gamma);
  const BigInt bn(n);
  TilingCertificate cert;
  cert.p = p;
  cert.gamma = gamma;
  cert.residue_level = W;
  const std::uint64_t count = ipow(p, static_cast<unsigned>(W));
  for (std::uint64_t k = 0; k < count; ++k) {
    TilingCheck chk{PAdic(ctx, BigInt(k)).times_p_power(-W), {}, std::nullopt, 1};
    for (const PAdic& f : pts) {
      const PAdic diff = chk.r - f;
      const PAdic frac = diff.fractional_part();
      if (!frac.truncate_above(-g).is_zero()) continue;
      const PAdic whole = diff - frac;  // an integer
      const BigInt w = whole.is_zero() ? BigInt(0)
                                       : whole.unit() * big_pow(p, static_cast<unsigned>(whole.exponent()));
      chk.translates.push_back(static_cast<std::uint64_t>(floor_mod(-w, bn)));
    }
    std::sort(chk.translates.begin(), chk.translates.end());
    std::vector<std::uint32_t> hits(n, 0);
    for (std::uint64_t t : chk.translates)
      for (std::uint64_t c : omega.digits()) ++hits[(c + t) % n];
    for (std::uint64_t x = 0; x < n; ++x) {
      if (hits[x] != 1) {
        chk.first_failure = x;
        chk.multiplicity = hits[x];
        break;
      }
    }
    cert.ok = cert.ok && !chk.first_failure;
    cert.checks.push_back(std::move(chk));
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Discrete sets
// ---------------------------------------------------------------------------

struct DiscreteSetProfile {
  std::size_t size = 0;
  std::vector<std::int64_t> I;  // admissible orders, ascending
  bool homogeneous = false;
};

inline std::vector<PAdic> sorted_distinct(std::vector<PAdic> e) {
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

/// I_E from every pairwise valuation; homogeneous iff #E = p^{#I_E}.
inline DiscreteSetProfile discrete_profile(const std::vector<PAdic>& raw) {
  if (raw.empty()) throw std::invalid_argument("discrete profile of an empty set");
  const std::vector<PAdic> e = sorted_distinct(raw);
  std::set<std::int64_t> orders;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j) orders.insert((e[i] - e[j]).exponent());
  DiscreteSetProfile prof;
  prof.size = e.size();
  prof.I.assign(orders.begin(), orders.end());
  const std::uint64_t p = e.front().prime();
  prof.homogeneous = orders.size() < 64 && BigInt(e.size()) == big_pow(p, static_cast<unsigned>(orders.size()));
  return prof;
}

/// #(E ∩ B(a, p^{-n})).
inline std::size_t window_count(const std::vector<PAdic>& e, const PAdic& a, std::int64_t n) {
  const Ball b{a, -n};
  return static_cast<std::size_t>(std::count_if(e.begin(), e.end(), [&](const PAdic& x) { return b.contains(x); }));
}

/// Piece of a piecewise translation: x -> x + shift on the ball.
struct IsometryPiece {
  Ball ball;
  PAdic shift;
};

struct Canonicalization {
  std::vector<std::int64_t> I;
  std::vector<PAdic> target;  // E^ = {sum_{i in I} beta_i p^i}, ascending
  std::vector<std::pair<PAdic, PAdic>> mapping;  // (e, f(e)) for e in E, ascending in e
  std::vector<IsometryPiece> pieces;

  /// Image of a point in one of the pieces.
  std::optional<PAdic> apply(const PAdic& x) const {
    for (const auto& piece : pieces)
      if (piece.ball.contains(x)) return x + piece.shift;
    return std::nullopt;
  }
};

/// Isometric bijection from a homogeneous finite E onto E^.
///
/// For e in E and i in I_E, beta_i(e) is digit i of e - e_B, where e_B is the
/// least (as a rational) element of E in the ball B(e, p^{-i}). Points split at
/// level i exactly when their digits beta_i differ, so f(e) = sum beta_i(e) p^i
/// preserves every distance. The map is recorded as one translation per point
/// on the ball e + p^{gamma_E + 1} Z_p.
inline Canonicalization canonicalize_discrete(const std::vector<PAdic>& raw) {
  const DiscreteSetProfile prof = discrete_profile(raw);
  if (!prof.homogeneous) throw std::domain_error("canonicalization needs a homogeneous set");
  const std::vector<PAdic> e = sorted_distinct(raw);
  const PrimeContext ctx = e.front().context();
  Canonicalization out;
  out.I = prof.I;

  out.target = {PAdic(ctx)};
  for (std::int64_t i : prof.I) {
    const std::size_t base = out.target.size();
    for (std::uint64_t b = 1; b < ctx.p(); ++b)
      for (std::size_t k = 0; k < base; ++k)
        out.target.push_back(out.target[k] + PAdic(ctx, BigInt(b)).times_p_power(i));
  }
  std::sort(out.target.begin(), out.target.end());

  const std::int64_t top = prof.I.empty() ? 0 : prof.I.back();
  for (const PAdic& x : e) {
    PAdic image(ctx);
    for (std::int64_t i : prof.I) {
      const Ball ball{x, -i};
      const PAdic* least = nullptr;
      for (const PAdic& y : e)
        if (ball.contains(y)) {
          least = &y;
          break;  // e is ascending
        }
      const unsigned beta = (x - *least).digit(i);
      image += PAdic(ctx, BigInt(beta)).times_p_power(i);
    }
    out.mapping.emplace_back(x, image);
    out.pieces.push_back(IsometryPiece{Ball{x, -(top + 1)}, image - x});
  }

  std::vector<PAdic> images;
  for (const auto& [x, y] : out.mapping) images.push_back(y);
  std::sort(images.begin(), images.end());
  if (images != out.target) throw std::logic_error("canonical labeling is not onto the target set");
  for (std::size_t i = 0; i < out.mapping.size(); ++i)
    for (std::size_t j = i + 1; j < out.mapping.size(); ++j)
      if (distance(out.mapping[i].first, out.mapping[j].first) !=
          distance(out.mapping[i].second, out.mapping[j].second))
        throw std::logic_error("canonical labeling does not preserve distances");
  return out;
}

}  // namespace padicspec
