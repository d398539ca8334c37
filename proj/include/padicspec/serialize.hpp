#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "padicspec/construct_verify.hpp"
#include "padicspec/cyclic_group.hpp"
#include "padicspec/cyclotomic.hpp"
#include "padicspec/measures.hpp"
#include "padicspec/padic.hpp"
#include "padicspec/set_model.hpp"

namespace padicspec {

using json = nlohmann::ordered_json;

namespace detail {

// Machine integers stay numbers; anything wider becomes a decimal string.
inline json big_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

inline BigInt big_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
      throw std::invalid_argument("not a decimal integer: '" + s + "'");
    return BigInt(s);
  }
  throw std::invalid_argument("expected an integer or decimal string");
}

}  // namespace detail

// --- PAdic -----------------------------------------------------------------

/// {"unit": "<decimal>", "valuation": v} with valuation null for zero.
inline json to_json(const PAdic& x) {
  json j;
  j["unit"] = x.unit().str();
  j["valuation"] = x.is_zero() ? json(nullptr) : json(x.exponent());
  return j;
}

inline PAdic padic_from_json(PrimeContext ctx, const json& j) {
  if (j.is_string()) return parse_padic(ctx, j.get<std::string>());
  if (j.is_number_integer()) return PAdic(ctx, j.get<std::int64_t>());
  if (!j.is_object() || !j.contains("unit")) throw std::invalid_argument("p-adic JSON needs a unit");
  const BigInt u = detail::big_from_json(j.at("unit"));
  if (u == 0) return PAdic(ctx);
  const json& v = j.value("valuation", json(nullptr));
  if (!v.is_number_integer()) throw std::invalid_argument("nonzero p-adic JSON needs an integer valuation");
  if (u % BigInt(ctx.p()) == 0) throw std::invalid_argument("p-adic unit is divisible by p");
  return PAdic::from_unit_power(ctx, u, v.get<std::int64_t>());
}

/// Exact rational text "num/den" (or "num") for a p-adic value.
inline std::string rational_text(const PAdic& x) { return rational_string(x.to_rational()); }

// --- GroupRingElement --------------------------------------------------------

inline json to_json(const GroupRingElement& z) {
  json coeffs = json::array();
  for (const auto& [e, c] : z.terms()) coeffs.push_back(json::array({e, detail::big_to_json(c)}));
  return json{{"p", z.p()}, {"n", z.level()}, {"coeffs", coeffs}};
}

inline GroupRingElement group_ring_from_json(const json& j) {
  const auto p = j.at("p").get<std::uint64_t>();
  const auto n = j.at("n").get<unsigned>();
  std::vector<GroupRingElement::Term> terms;
  for (const json& t : j.at("coeffs")) {
    if (!t.is_array() || t.size() != 2) throw std::invalid_argument("coefficient entries are [exponent, value] pairs");
    terms.emplace_back(t[0].get<std::uint64_t>(), detail::big_from_json(t[1]));
  }
  return GroupRingElement::from_terms(p, n, std::move(terms));
}

// --- Sets ---------------------------------------------------------------------

inline json to_json(const AdmissibleOrders& a) {
  return json{{"finite", json(std::vector<std::int64_t>(a.finite_part.begin(), a.finite_part.end()))},
              {"tail", a.tail_threshold}};
}

inline json to_json(const LatticePeriodicSet& l) {
  json finite = json::array();
  for (const PAdic& f : l.finite_part()) finite.push_back(rational_text(f));
  json j{{"p", l.p()}, {"level", l.level()}, {"finite", finite}};
  if (!l.offset().is_zero()) j["offset"] = rational_text(l.offset());
  return j;
}

/// Accepts {"p", "level", "finite": [...], "offset"?}; elements may be p-adic
/// literals ("1/2", "3*2^-2"), integers, or {unit, valuation} objects. A
/// missing "p" falls back to expected_p.
inline LatticePeriodicSet lattice_from_json(const json& j, std::uint64_t expected_p) {
  const std::uint64_t p = j.contains("p") ? j.at("p").get<std::uint64_t>() : expected_p;
  if (p != expected_p)
    throw std::invalid_argument("lattice set over p = " + std::to_string(p) + " but set is over p = " +
                                std::to_string(expected_p));
  const PrimeContext ctx(p);
  std::vector<PAdic> finite;
  for (const json& f : j.at("finite")) finite.push_back(padic_from_json(ctx, f));
  PAdic offset = j.contains("offset") ? padic_from_json(ctx, j.at("offset")) : PAdic(ctx);
  return LatticePeriodicSet(ctx, j.at("level").get<std::int64_t>(), std::move(finite), std::move(offset));
}

/// Summary of a normalized set, with canonical spectrum and complement when
/// the set is homogeneous.
inline json analyze_json(const CompactOpenSet& omega) {
  const Homogeneity h = is_p_homogeneous(omega);
  json j;
  j["p"] = omega.p();
  j["gamma"] = omega.gamma();
  j["digits"] = omega.digits();
  j["scale"] = omega.scale();
  j["offset"] = omega.offset().to_string();
  j["homogeneous"] = h.homogeneous;
  j["I"] = h.I;
  j["J"] = h.J;
  j["I_Omega"] = to_json(admissible_orders(omega));
  j["measure"] = rational_string(haar_measure(omega));
  if (h.homogeneous) {
    j["spectrum"] = to_json(canonical_spectrum(omega));
    j["complement"] = to_json(canonical_tiling_complement(omega));
  }
  return j;
}

inline json tree_json(const PTree& t) {
  const Homogeneity h = detail::homogeneity_by_walk(t);
  json levels = json::array();
  for (std::size_t n = 0; n < t.levels.size(); ++n) {
    json lv{{"level", n}, {"vertices", t.levels[n]}};
    if (n < t.branching.size()) lv["branching"] = t.branching[n];
    levels.push_back(lv);
  }
  json j{{"p", t.p}, {"gamma", t.gamma}, {"level_sizes", t.level_sizes()}, {"homogeneous", h.homogeneous}};
  if (h.homogeneous) {
    j["I"] = h.I;
    j["J"] = h.J;
  }
  j["levels"] = levels;
  return j;
}

// --- Verdicts and certificates ---------------------------------------------

inline json to_json(const Verdict& v) {
  auto opt = [](const std::optional<std::vector<std::uint64_t>>& x) { return x ? json(*x) : json(nullptr); };
  json j;
  j["p"] = v.set.p();
  j["gamma"] = v.set.gamma();
  j["set"] = v.set.elements();
  j["homogeneous"] = v.homogeneous;
  j["spectral"] = v.spectral;
  j["tile"] = v.tile;
  j["zero_powers"] = v.zero_powers;
  j["I"] = v.I;
  j["J"] = v.J;
  j["spectrum"] = opt(v.spectrum);
  j["complement"] = opt(v.complement);
  if (v.oracles_run) {
    j["oracle"] = json{{"spectral", v.oracle_spectral()},
                       {"tile", v.oracle_tile()},
                       {"spectrum", opt(v.oracle_spectrum)},
                       {"complement", opt(v.oracle_complement)}};
  }
  j["consistent"] = v.consistent;
  if (!v.disagreements.empty()) j["disagreements"] = v.disagreements;
  return j;
}

inline json to_json(const SpectralCertificate& c) {
  json checks = json::array();
  for (const ResidueCheck& r : c.checks)
    checks.push_back(json{{"eta", rational_text(r.eta)},
                          {"window_points", r.window_points},
                          {"residual", to_json(r.residual)},
                          {"zero", r.zero}});
  return json{{"kind", "spectral"},
              {"ok", c.ok},
              {"p", c.p},
              {"cyclotomic_level", c.cyclotomic_level},
              {"residue_level", c.residue_level},
              {"checks", checks}};
}

inline json to_json(const TilingCertificate& c) {
  json checks = json::array();
  for (const TilingCheck& t : c.checks) {
    json e{{"r", rational_text(t.r)}, {"translates", t.translates}, {"exact", !t.first_failure.has_value()}};
    if (t.first_failure) {
      e["first_failure"] = *t.first_failure;
      e["multiplicity"] = t.multiplicity;
    }
    checks.push_back(e);
  }
  return json{{"kind", "tiling"},
              {"ok", c.ok},
              {"p", c.p},
              {"gamma", c.gamma},
              {"residue_level", c.residue_level},
              {"checks", checks}};
}

inline json to_json(const DiscreteSetProfile& d) {
  return json{{"size", d.size}, {"I", d.I}, {"homogeneous", d.homogeneous}};
}

inline json to_json(const Canonicalization& c) {
  json target = json::array();
  for (const PAdic& x : c.target) target.push_back(rational_text(x));
  json pieces = json::array();
  for (const IsometryPiece& piece : c.pieces)
    pieces.push_back(json{{"center", rational_text(piece.ball.center)},
                          {"radius_exponent", piece.ball.radius_exponent},
                          {"shift", rational_text(piece.shift)}});
  return json{{"I", c.I}, {"target", target}, {"pieces", pieces}};
}

// --- Singular measure specs ------------------------------------------------

/// {p, preperiod, period, choice: "zero" | "repeat" | [[level, prefix, digit], ...]}.
inline SingularMeasureSpec spec_from_json(const json& j) {
  const PrimeContext ctx(j.at("p").get<std::uint64_t>());
  const std::string pre = j.value("preperiod", std::string());
  const std::string per = j.at("period").get<std::string>();
  const json& choice = j.contains("choice") ? j.at("choice") : json("zero");
  if (choice.is_string()) {
    const std::string c = choice.get<std::string>();
    if (c == "zero") return SingularMeasureSpec(ctx, pre, per, SingularMeasureSpec::Choice::zero);
    if (c == "repeat") return SingularMeasureSpec(ctx, pre, per, SingularMeasureSpec::Choice::repeat);
    throw std::invalid_argument("unknown digit choice '" + c + "'");
  }
  std::map<std::pair<unsigned, std::uint64_t>, unsigned> table;
  for (const json& row : choice) {
    if (!row.is_array() || row.size() != 3) throw std::invalid_argument("choice table rows are [level, prefix, digit]");
    table[{row[0].get<unsigned>(), row[1].get<std::uint64_t>()}] = row[2].get<unsigned>();
  }
  return SingularMeasureSpec(ctx, pre, per, SingularMeasureSpec::Choice::table, std::move(table));
}

inline json to_json(const SingularMeasureSpec& s) {
  json j{{"p", s.p()}, {"preperiod", s.preperiod()}, {"period", s.period()}};
  switch (s.choice()) {
    case SingularMeasureSpec::Choice::zero: j["choice"] = "zero"; break;
    case SingularMeasureSpec::Choice::repeat: j["choice"] = "repeat"; break;
    case SingularMeasureSpec::Choice::table: {
      json rows = json::array();
      for (const auto& [key, d] : s.table()) rows.push_back(json::array({key.first, key.second, d}));
      j["choice"] = rows;
      break;
    }
  }
  return j;
}

}  // namespace padicspec
