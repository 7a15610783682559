#include "odenorm/invariants.hpp"

#include <algorithm>

#include "odenorm/error.hpp"

namespace odenorm {

OdeJet make_jet(TruncatedSeries F, bool polynomial) {
  if (!same_context(F.ctx(), contexts::xyu())) {
    throw ContextError("ODE right-hand side must live in (x, y, u)");
  }
  return OdeJet{std::move(F), {}, polynomial};
}

TruncatedSeries total_derivative(const OdeJet& ode, const TruncatedSeries& G) {
  if (!same_context(G.ctx(), contexts::xyu()) || !same_context(ode.F.ctx(), G.ctx())) {
    throw ContextError("total_derivative: operands must live in (x, y, u)");
  }
  const int W = G.trunc() - 1;
  if (W < 0) throw TruncationError("total_derivative: truncation weight exhausted");
  TruncatedSeries Gu = differentiate(G, "u");
  const int T = std::min(W, ode.F.trunc() + Gu.valuation());
  TruncatedSeries result = truncate(differentiate(G, "x"), T);
  if (G.trunc() >= 2) {
    TruncatedSeries u = TruncatedSeries::variable(G.ctx(), "u", T);
    result = add(result, multiply_to(u, differentiate(G, "y"), T));
  }
  return add(result, multiply_to(ode.F, Gu, T));
}

OdeJet lift(const OdeJet& ode, int trunc) {
  if (!ode.polynomial || ode.F.trunc() >= trunc) return ode;
  return OdeJet{with_trunc(ode.F, trunc), ode.base, true};
}

TresseInvariants tresse_invariants(const OdeJet& ode) {
  const TruncatedSeries F = lift(ode, 4).F;
  if (!same_context(F.ctx(), contexts::xyu())) {
    throw ContextError("tresse_invariants: F must live in (x, y, u)");
  }
  if (F.trunc() < 4) {
    throw TruncationError("tresse_invariants: need truncation weight >= 4, got " +
                          std::to_string(F.trunc()));
  }
  const int T = F.trunc() - 4;
  TruncatedSeries Fu = differentiate(F, "u");
  TruncatedSeries Fuu = differentiate(Fu, "u");
  TruncatedSeries Fy = differentiate(F, "y");
  TruncatedSeries Fyu = differentiate(Fy, "u");
  TruncatedSeries Fyy = differentiate(Fy, "y");

  TruncatedSeries I1 = differentiate(differentiate(Fuu, "u"), "u");

  TruncatedSeries DFuu = total_derivative(ode, Fuu);
  TruncatedSeries I2 = truncate(total_derivative(ode, DFuu), T);
  I2 = I2 - multiply_to(Fu, DFuu, T);
  I2 = I2 - Rational(4) * truncate(total_derivative(ode, Fyu), T);
  I2 = I2 + Rational(6) * Fyy;
  I2 = I2 - Rational(3) * multiply_to(Fy, Fuu, T);
  I2 = I2 + Rational(4) * multiply_to(Fu, Fyu, T);
  return {truncate(I1, T), truncate(I2, T)};
}

PointClass classify_point(const OdeJet& ode) {
  TresseInvariants inv = tresse_invariants(ode);
  PointClass pc{PointKind::flat, inv.I1.constant_term(), inv.I2.constant_term()};
  bool z1 = sgn(pc.I1_at) == 0, z2 = sgn(pc.I2_at) == 0;
  if (!z1 && !z2) {
    pc.kind = PointKind::strongly_nonflat;
  } else if (z1 != z2) {
    pc.kind = PointKind::semi_flat;
  }
  return pc;
}

std::string to_string(PointKind kind) {
  switch (kind) {
    case PointKind::flat:
      return "flat";
    case PointKind::semi_flat:
      return "semi-flat";
    case PointKind::strongly_nonflat:
      return "strongly-nonflat";
  }
  return "unknown";
}

}  // namespace odenorm
