#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "padicspec/arith.hpp"
#include "padicspec/cyclotomic.hpp"
#include "padicspec/padic.hpp"

namespace padicspec {

// ---------------------------------------------------------------------------
// Digit trees
// ---------------------------------------------------------------------------

/// Finite subtree of T^(gamma) spanned by a digit set C in [0, p^gamma).
///
/// levels[n] is C mod p^n (sorted), for 0 <= n <= gamma. branching[n][k] is the
/// number of children of levels[n][k] at level n + 1.
struct PTree {
  std::uint64_t p = 2;
  unsigned gamma = 0;
  std::vector<std::vector<std::uint64_t>> levels;
  std::vector<std::vector<unsigned>> branching;

  std::vector<std::size_t> level_sizes() const {
    std::vector<std::size_t> out;
    for (const auto& l : levels) out.push_back(l.size());
    return out;
  }
};

inline PTree build_tree(std::uint64_t p, unsigned gamma, const std::vector<std::uint64_t>& digits) {
  PTree t;
  t.p = p;
  t.gamma = gamma;
  t.levels.resize(gamma + 1);
  t.branching.resize(gamma);
  std::uint64_t m = 1;
  for (unsigned n = 0; n <= gamma; ++n) {
    std::vector<std::uint64_t> lv;
    lv.reserve(digits.size());
    for (std::uint64_t c : digits) lv.push_back(c % m);
    std::sort(lv.begin(), lv.end());
    lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
    t.levels[n] = std::move(lv);
    if (n < gamma) m *= p;
  }
  m = 1;
  for (unsigned n = 0; n < gamma; ++n) {
    const auto& parents = t.levels[n];
    std::vector<unsigned> counts(parents.size(), 0);
    for (std::uint64_t child : t.levels[n + 1]) {
      auto it = std::lower_bound(parents.begin(), parents.end(), child % m);
      ++counts[static_cast<std::size_t>(it - parents.begin())];
    }
    t.branching[n] = std::move(counts);
    m *= p;
  }
  return t;
}

/// Outcome of the p-homogeneity test. I lists the levels where every vertex
/// has p children, J the levels where every vertex has one.
struct Homogeneity {
  bool homogeneous = false;
  std::vector<unsigned> I;
  std::vector<unsigned> J;
};

namespace detail {

// Per-vertex walk: each level uniformly 1 or uniformly p.
inline Homogeneity homogeneity_by_walk(const PTree& t) {
  Homogeneity h;
  for (unsigned n = 0; n < t.gamma; ++n) {
    const auto& b = t.branching[n];
    const bool all_one = std::all_of(b.begin(), b.end(), [](unsigned x) { return x == 1; });
    const bool all_p = std::all_of(b.begin(), b.end(), [&](unsigned x) { return x == t.p; });
    if (all_p && t.p != 1) {
      h.I.push_back(n);
    } else if (all_one) {
      h.J.push_back(n);
    } else {
      return Homogeneity{};
    }
  }
  h.homogeneous = true;
  return h;
}

inline bool is_power_of(std::uint64_t x, std::uint64_t p) {
  while (x > 1 && x % p == 0) x /= p;
  return x == 1;
}

// Counting form: #(C mod p^i) is a power of p for every i.
inline bool homogeneity_by_counting(const PTree& t) {
  for (const auto& l : t.levels)
    if (!is_power_of(l.size(), t.p)) return false;
  return true;
}

}  // namespace detail

/// Both characterizations are evaluated; a disagreement is a logic error.
inline Homogeneity tree_homogeneity(const PTree& t) {
  Homogeneity h = detail::homogeneity_by_walk(t);
  if (h.homogeneous != detail::homogeneity_by_counting(t))
    throw std::logic_error("tree walk and level counting disagree on homogeneity");
  return h;
}

// ---------------------------------------------------------------------------
// Compact open sets
// ---------------------------------------------------------------------------

/// Admissible p-orders {v_p(x - y) : x != y in the set}: a finite part below
/// tail_threshold plus every integer >= tail_threshold.
struct AdmissibleOrders {
  std::set<std::int64_t> finite_part;
  std::int64_t tail_threshold = 0;

  bool contains(std::int64_t i) const { return i >= tail_threshold || finite_part.count(i) != 0; }
};

/// offset + p^scale * core, where core = union over c in digits of (c + p^gamma Z_p).
///
/// Instances produced by normalize() satisfy: 0 in digits, digits sorted in
/// [0, p^gamma), gamma minimal, and (for gamma > 0) the core is not contained in
/// p Z_p.
class CompactOpenSet {
 public:
  CompactOpenSet(PrimeContext ctx, std::int64_t scale, PAdic offset, unsigned gamma,
                 std::vector<std::uint64_t> digits)
      : ctx_(ctx), scale_(scale), offset_(std::move(offset)), gamma_(gamma), digits_(std::move(digits)) {}

  const PrimeContext& context() const { return ctx_; }
  std::uint64_t p() const { return ctx_.p(); }
  std::int64_t scale() const { return scale_; }
  const PAdic& offset() const { return offset_; }
  unsigned gamma() const { return gamma_; }
  const std::vector<std::uint64_t>& digits() const { return digits_; }

  /// Exponent L with the set a disjoint union of balls c' + p^L Z_p.
  std::int64_t fine_level() const { return scale_ + static_cast<std::int64_t>(gamma_); }

  /// The disjoint balls making up the set, ordered as digits().
  std::vector<Ball> balls() const {
    std::vector<Ball> out;
    out.reserve(digits_.size());
    for (std::uint64_t c : digits_)
      out.push_back(Ball{center_of(c), -fine_level()});
    return out;
  }

  PAdic center_of(std::uint64_t c) const {
    return offset_ + PAdic(ctx_, BigInt(c)).times_p_power(scale_);
  }

  bool contains(const PAdic& x) const {
    for (const Ball& b : balls())
      if (b.contains(x)) return true;
    return false;
  }

  friend bool operator==(const CompactOpenSet&, const CompactOpenSet&) = default;

 private:
  PrimeContext ctx_;
  std::int64_t scale_;
  PAdic offset_;
  unsigned gamma_;
  std::vector<std::uint64_t> digits_;
};

namespace detail {

constexpr std::uint64_t kMaxRefinedBalls = 1u << 22;

// Lexicographic comparison of digit sequences starting at the common valuation.
inline bool digits_less(const PAdic& x, const PAdic& y, std::int64_t from, std::int64_t upto) {
  for (std::int64_t i = from; i < upto; ++i) {
    const unsigned a = x.digit(i), b = y.digit(i);
    if (a != b) return a < b;
  }
  return false;
}

}  // namespace detail

/// Canonical form of a nonempty finite union of balls.
///
/// Steps: refine every ball to the smallest radius present; deduplicate; pick an
/// anchor (0 if the set contains 0, else the center of minimal valuation with
/// lexicographically smallest digit sequence) and translate it to 0; factor out
/// p^s so the core lies in Z_p and is not inside p Z_p; then lower gamma while
/// the last level is fully branched.
inline CompactOpenSet normalize(PrimeContext ctx, const std::vector<Ball>& raw) {
  if (raw.empty()) throw std::invalid_argument("empty union of balls");
  for (const Ball& b : raw)
    if (!(b.center.context() == ctx)) throw std::invalid_argument("ball center over a different prime");

  // Balls b.center + p^{k} Z_p with k = -radius_exponent; refine to the largest k.
  std::int64_t kfine = -raw.front().radius_exponent;
  for (const Ball& b : raw) kfine = std::max(kfine, -b.radius_exponent);

  std::uint64_t total = 0;
  for (const Ball& b : raw) {
    const std::int64_t extra = kfine + b.radius_exponent;
    if (extra > 63) throw std::length_error("refinement too large");
    const std::uint64_t count = ipow(ctx.p(), static_cast<unsigned>(extra));
    total += count;
    if (total > detail::kMaxRefinedBalls) throw std::length_error("refinement too large");
  }

  std::set<PAdic> centers;
  for (const Ball& b : raw) {
    const std::int64_t k = -b.radius_exponent;
    const std::uint64_t count = ipow(ctx.p(), static_cast<unsigned>(kfine - k));
    const PAdic step = PAdic(ctx, 1).times_p_power(k);
    PAdic x = b.center;
    for (std::uint64_t j = 0; j < count; ++j) {
      centers.insert(x.truncate_below(kfine));
      x += step;
    }
  }

  PAdic anchor(ctx);
  if (!centers.count(PAdic(ctx))) {
    const PAdic* best = nullptr;
    for (const PAdic& y : centers) {
      if (best == nullptr || y.exponent() < best->exponent() ||
          (y.exponent() == best->exponent() && detail::digits_less(y, *best, y.exponent(), kfine)))
        best = &y;
    }
    anchor = *best;
  }

  std::vector<PAdic> shifted;
  std::int64_t s = kfine;
  for (const PAdic& y : centers) {
    PAdic z = (y - anchor).truncate_below(kfine);
    if (!z.is_zero()) s = std::min(s, z.exponent());
    shifted.push_back(std::move(z));
  }
  const std::int64_t g = kfine - s;
  if (g > 63) throw std::length_error("normalized level too deep");
  unsigned gamma = static_cast<unsigned>(g);
  std::uint64_t modulus = ipow(ctx.p(), gamma);

  std::vector<std::uint64_t> digits;
  digits.reserve(shifted.size());
  for (const PAdic& z : shifted) {
    const PAdic c = z.times_p_power(-s);
    digits.push_back(c.is_zero() ? 0 : static_cast<std::uint64_t>(c.unit() * big_pow(ctx.p(), static_cast<unsigned>(c.exponent()))));
  }
  std::sort(digits.begin(), digits.end());
  digits.erase(std::unique(digits.begin(), digits.end()), digits.end());

  while (gamma > 0) {
    modulus /= ctx.p();
    std::vector<std::uint64_t> coarse;
    for (std::uint64_t c : digits) coarse.push_back(c % modulus);
    std::sort(coarse.begin(), coarse.end());
    coarse.erase(std::unique(coarse.begin(), coarse.end()), coarse.end());
    if (coarse.size() * ctx.p() != digits.size()) break;
    digits = std::move(coarse);
    --gamma;
  }
  return CompactOpenSet(ctx, s, anchor, gamma, std::move(digits));
}

inline CompactOpenSet normalize(const CompactOpenSet& omega) { return normalize(omega.context(), omega.balls()); }

/// The set union over c in digits of (c + p^gamma Z_p), normalized.
inline CompactOpenSet from_digits(PrimeContext ctx, unsigned gamma, const std::vector<std::uint64_t>& digits) {
  std::vector<Ball> balls;
  balls.reserve(digits.size());
  for (std::uint64_t c : digits) balls.push_back(Ball{PAdic(ctx, BigInt(c)), -static_cast<std::int64_t>(gamma)});
  return normalize(ctx, balls);
}

/// Core digits written at a finer level L >= gamma: every c + k p^gamma below p^L.
inline std::vector<std::uint64_t> refine_digits(const CompactOpenSet& omega, unsigned level) {
  if (level < omega.gamma()) throw std::invalid_argument("refinement level below gamma");
  const std::uint64_t step = ipow(omega.p(), omega.gamma());
  const std::uint64_t copies = ipow(omega.p(), level - omega.gamma());
  if (copies > detail::kMaxRefinedBalls / omega.digits().size()) throw std::length_error("refinement too large");
  std::vector<std::uint64_t> out;
  out.reserve(copies * omega.digits().size());
  for (std::uint64_t k = 0; k < copies; ++k)
    for (std::uint64_t c : omega.digits()) out.push_back(c + k * step);
  std::sort(out.begin(), out.end());
  return out;
}

inline PTree build_tree(const CompactOpenSet& omega) { return build_tree(omega.p(), omega.gamma(), omega.digits()); }

/// Tree of the core written at level L >= gamma; levels past gamma branch fully.
inline PTree build_tree(const CompactOpenSet& omega, unsigned level) {
  return build_tree(omega.p(), level, refine_digits(omega, level));
}

/// Homogeneity of the core tree; I and J are core levels in [0, gamma).
inline Homogeneity is_p_homogeneous(const CompactOpenSet& omega) { return tree_homogeneity(build_tree(omega)); }

inline Homogeneity is_p_homogeneous(const CompactOpenSet& omega, unsigned level) {
  return tree_homogeneity(build_tree(omega, level));
}

inline AdmissibleOrders admissible_orders(const CompactOpenSet& omega) {
  const PTree t = build_tree(omega);
  AdmissibleOrders out;
  for (unsigned n = 0; n < t.gamma; ++n) {
    const auto& b = t.branching[n];
    if (std::any_of(b.begin(), b.end(), [](unsigned x) { return x > 1; }))
      out.finite_part.insert(static_cast<std::int64_t>(n) + omega.scale());
  }
  out.tail_threshold = omega.fine_level();
  return out;
}

/// Haar measure with m(Z_p) = 1.
inline Rational haar_measure(const CompactOpenSet& omega) {
  const std::int64_t L = omega.fine_level();
  Rational m(static_cast<long long>(omega.digits().size()));
  if (L >= 0) return m / Rational(big_pow(omega.p(), static_cast<unsigned>(L)));
  return m * Rational(big_pow(omega.p(), static_cast<unsigned>(-L)));
}

/// Exact value of a Fourier transform: scalar * (sum of roots of unity) inside
/// the support, 0 outside.
struct FourierValue {
  bool in_support = false;
  Rational scalar = 0;
  GroupRingElement sum{2, 0};

  bool is_zero() const { return !in_support || scalar == 0 || sum.is_zero(); }
};

/// Transform of the indicator, with the convention
///   1^_Omega(xi) = p^{-L} 1_{B(0, p^L)}(xi) sum_c chi(-c xi)
/// where the set is the disjoint union of balls c + p^L Z_p (L = fine_level()).
/// The sum is returned at the smallest cyclotomic level holding every term.
inline FourierValue indicator_fourier(const CompactOpenSet& omega, const PAdic& xi) {
  FourierValue out;
  const std::int64_t L = omega.fine_level();
  out.in_support = xi.valuation() >= ExtInt(-L);
  out.sum = GroupRingElement(omega.p(), 0);
  if (!out.in_support) return out;
  out.scalar = L >= 0 ? Rational(1) / Rational(big_pow(omega.p(), static_cast<unsigned>(L)))
                      : Rational(big_pow(omega.p(), static_cast<unsigned>(-L)));
  std::vector<PAdic> phases;
  std::int64_t depth = 0;
  for (std::uint64_t c : omega.digits()) {
    PAdic t = -(omega.center_of(c) * xi);
    if (!t.is_zero()) depth = std::max(depth, -t.exponent());
    phases.push_back(std::move(t));
  }
  std::vector<GroupRingElement::Term> terms;
  for (const PAdic& t : phases) terms.emplace_back(t.character_index(static_cast<unsigned>(depth)), BigInt(1));
  out.sum = GroupRingElement::from_terms(omega.p(), static_cast<unsigned>(depth), std::move(terms));
  return out;
}

/// Graphviz rendering of a digit tree; levels in I are annotated "branch p".
inline std::string to_dot(const PTree& t, const std::string& name = "ptree") {
  const Homogeneity h = detail::homogeneity_by_walk(t);
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  os << "  rankdir=TB;\n";
  os << "  node [shape=circle];\n";
  os << "  label=\"p=" << t.p << " gamma=" << t.gamma << " homogeneous=" << (h.homogeneous ? "true" : "false")
     << "\";\n";
  for (unsigned n = 0; n < t.levels.size(); ++n) {
    os << "  level" << n << " [shape=plaintext, label=\"level " << n;
    if (n < t.gamma && h.homogeneous) {
      const bool in_i = std::find(h.I.begin(), h.I.end(), n) != h.I.end();
      os << (in_i ? ": branch p" : ": branch 1");
    }
    os << "\"];\n";
    os << "  { rank=same; level" << n << ";";
    for (std::uint64_t x : t.levels[n]) os << " \"" << n << ":" << x << "\";";
    os << " }\n";
    for (std::uint64_t x : t.levels[n]) os << "  \"" << n << ":" << x << "\" [label=\"" << x << "\"];\n";
  }
  for (unsigned n = 0; n + 1 < t.levels.size(); ++n) {
    os << "  level" << n << " -> level" << n + 1 << " [style=invis];\n";
    std::uint64_t m = ipow(t.p, n);
    for (std::uint64_t y : t.levels[n + 1])
      os << "  \"" << n << ":" << (y % m) << "\" -> \"" << n + 1 << ":" << y << "\";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace padicspec
