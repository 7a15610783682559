#pragma once

// Polynomial expressions with rational coefficients.
//
//   expr   := term (("+" | "-") term)*
//   term   := unary ("*" unary)*
//   unary  := "-" unary | power
//   power  := atom ("^" uint)?
//   atom   := identifier | uint ("/" uint)? | "(" expr ")"
//
// "^" binds tighter than unary minus, so -x^2 is -(x^2).

#include <string>
#include <string_view>
#include <utility>

#include "odenorm/pseries.hpp"

namespace odenorm {

/// Largest weight a parsed polynomial may reach before it is rejected.
inline constexpr int kMaxParsedWeight = 4096;

/// Parses `text` as an exact polynomial over the variables of `ctx`. The
/// result's trunc is an upper bound for the weight of its monomials, so it is
/// safe to use with SubstitutionMode::polynomial.
TruncatedSeries parse_polynomial(std::string_view text, const ContextPtr& ctx);

/// F(x, y, u) truncated at weight W.
TruncatedSeries parse_ode(std::string_view text, int weight);

/// "f ; g" in (x, y), truncated at weight W.
std::pair<TruncatedSeries, TruncatedSeries> parse_map(std::string_view text, int weight);

/// Exact polynomial components of "f ; g".
std::pair<TruncatedSeries, TruncatedSeries> parse_map_polynomial(std::string_view text);

struct FormatOptions {
  /// Print the variable u as y'. Output only; such text does not parse back.
  bool jet_alias = false;
};

std::string format_series(const TruncatedSeries& s, FormatOptions options = {});
std::string format_rational(const Rational& q);

}  // namespace odenorm
