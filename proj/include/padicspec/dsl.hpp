#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "padicspec/padic.hpp"
#include "padicspec/scanner.hpp"
#include "padicspec/set_model.hpp"

namespace padicspec {

namespace detail {

// term := padic_literal "+" ("p" | P) "^" INT "Z" | "Z"
inline Ball scan_ball(Scanner& s, PrimeContext ctx) {
  if (s.peek() == 'Z') {
    s.accept('Z');
    if (s.accept('_')) s.expect('p');
    return Ball{PAdic(ctx), 0};
  }
  PAdic center = scan_padic_literal(s, ctx);
  s.expect('+');
  const std::size_t l = s.line(), c = s.column();
  if (!s.accept('p')) {
    BigInt base = s.integer();
    if (base != BigInt(ctx.p())) throw ParseError("ball radius base must be p = " + std::to_string(ctx.p()), l, c);
  }
  s.expect('^');
  const std::int64_t k = s.small_integer();
  s.expect('Z');
  if (s.accept('_')) s.expect('p');
  return Ball{center, -k};
}

}  // namespace detail

/// Raw balls of a set program, before normalization.
struct SetProgram {
  PrimeContext ctx;
  std::vector<Ball> balls;
};

/// Grammar:
///   program := "p=" INT ";" "{" term ("," term)* "}"
///   term    := padic_literal "+" "p^" INT "Z" | "Z"
/// The base of "p^" may be written as the letter p or as the prime itself.
inline SetProgram parse_program(std::string_view text) {
  detail::Scanner s(text);
  s.expect('p');
  s.expect('=');
  const std::size_t pl = s.line(), pc = s.column();
  const BigInt pv = s.integer();
  if (pv < 2 || pv > BigInt(std::numeric_limits<std::uint32_t>::max()) || !is_prime(static_cast<std::uint64_t>(pv)))
    throw ParseError("p = " + pv.str() + " is not a supported prime", pl, pc);
  const PrimeContext ctx(static_cast<std::uint64_t>(pv));
  s.expect(';');
  s.expect('{');
  SetProgram prog{ctx, {}};
  if (s.peek() == '}') s.fail("empty union of balls");
  prog.balls.push_back(detail::scan_ball(s, ctx));
  while (s.accept(',')) prog.balls.push_back(detail::scan_ball(s, ctx));
  s.expect('}');
  if (!s.at_end()) s.fail("trailing characters after set");
  return prog;
}

/// Parses and normalizes. Throws ParseError on malformed input.
inline CompactOpenSet parse_set(std::string_view text) {
  const SetProgram prog = parse_program(text);
  return normalize(prog.ctx, prog.balls);
}

/// DSL text for a normalized set, re-parsing to an equal value.
inline std::string to_dsl(const CompactOpenSet& omega) {
  std::string out = "p=" + std::to_string(omega.p()) + "; {";
  bool first = true;
  for (const Ball& b : omega.balls()) {
    if (!first) out += ", ";
    first = false;
    out += b.center.to_string() + " + p^" + std::to_string(-b.radius_exponent) + " Z";
  }
  return out + "}";
}

}  // namespace padicspec
