#pragma once

#include <random>
#include <vector>

#include "odenorm/pseries.hpp"

namespace odenorm::testing {

inline Rational random_rational(std::mt19937& rng, int span = 5) {
  std::uniform_int_distribution<int> num(-span, span);
  std::uniform_int_distribution<int> den(1, 3);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

/// Random polynomial in ctx with up to `count` terms of weight in [lo, hi].
inline TruncatedSeries random_series(std::mt19937& rng, const ContextPtr& ctx, int trunc,
                                     int lo, int hi, int count) {
  std::vector<std::pair<Monomial, Rational>> terms;
  std::uniform_int_distribution<int> pick(0, 3);
  for (int n = 0; n < count; ++n) {
    Monomial m;
    int w = 0;
    int target = std::uniform_int_distribution<int>(lo, hi)(rng);
    for (int guard = 0; guard < 64 && w < target; ++guard) {
      std::size_t v = std::uniform_int_distribution<std::size_t>(0, ctx->size() - 1)(rng);
      if (w + ctx->weight(v) > target) continue;
      ++m.exp[v];
      w += ctx->weight(v);
    }
    if (w < lo || pick(rng) == 0) continue;
    terms.emplace_back(m, random_rational(rng));
  }
  return TruncatedSeries::from_terms(ctx, trunc, std::move(terms));
}

inline TruncatedSeries var(const ContextPtr& ctx, const char* name, int trunc) {
  return TruncatedSeries::variable(ctx, name, trunc);
}

inline TruncatedSeries cst(const ContextPtr& ctx, int trunc, Rational c) {
  return TruncatedSeries::constant(ctx, trunc, c);
}

}  // namespace odenorm::testing
