#pragma once

// JSON documents for the command-line tool. Rationals are strings ("num",
// "den"), floats are decimal strings, and terms follow canonical series order.

#include "json.hpp"

#include "odenorm/chains.hpp"
#include "odenorm/invariants.hpp"
#include "odenorm/normalform.hpp"
#include "odenorm/pseries.hpp"

namespace odenorm {

using Json = nlohmann::ordered_json;

/// {"vars", "weights", "trunc", "terms": [{"exp", "num", "den"}]}
Json series_json(const TruncatedSeries& s);
Json terms_json(const TruncatedSeries& s);
Json params_json(const NormalizationParams& p);

/// {"weight", "params", "phi_terms", "ode_terms", "map": {"f", "g"}}
Json normal_form_json(const OdeNormalForm& nf, int weight);
/// The normal-form document of the exact stage plus "epsilon", "precision",
/// "s", "t", "z2_symmetric" and "float_terms": [{"exp", "val"}].
Json special_form_json(const SpecialForm& sf, int digits);
Json verdict_json(const Verdict& v);
/// {"alpha", "beta", "step", "points": [{"b", "x", "y", "u"}]}
Json chain_json(const ChainPolyline& chain, int digits);

/// "x^4*a^2", or "1" for the empty monomial.
std::string monomial_text(const VarContext& ctx, const Monomial& m);

}  // namespace odenorm
