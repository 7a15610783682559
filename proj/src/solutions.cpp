#include "odenorm/solutions.hpp"

#include <algorithm>
#include <climits>

#include "odenorm/error.hpp"

namespace odenorm {

namespace {

TruncatedSeries var(const ContextPtr& ctx, const char* name, int trunc) {
  return TruncatedSeries::variable(ctx, name, trunc);
}

void require_ctx(const TruncatedSeries& s, const ContextPtr& ctx, const char* what) {
  if (!same_context(s.ctx(), ctx)) throw ContextError(std::string(what) + ": wrong context");
}

/// s(0, a, b) as a series in (a, b).
TruncatedSeries at_x_zero(const TruncatedSeries& s) {
  std::vector<std::pair<Monomial, Rational>> terms;
  for (const Term& t : s.terms()) {
    if (t.mono[0] == 0) terms.emplace_back(Monomial{t.mono[1], t.mono[2]}, t.coeff);
  }
  return TruncatedSeries::from_terms(contexts::ab(), s.trunc(), std::move(terms));
}

/// (x, a, b) -> (x, u, y): a and b stand for u and y.
TruncatedSeries relabel_xab_as_xyu(const TruncatedSeries& s) {
  std::vector<std::pair<Monomial, Rational>> terms;
  for (const Term& t : s.terms()) {
    terms.emplace_back(Monomial{t.mono[0], t.mono[2], t.mono[1]}, t.coeff);
  }
  return TruncatedSeries::from_terms(contexts::xyu(), s.trunc(), std::move(terms));
}

void require_origin(const TruncatedSeries& s, const char* what) {
  if (sgn(s.constant_term()) != 0) {
    throw DomainError(std::string(what) + " does not fix the origin");
  }
}

}  // namespace

void check_shape(const SolutionManifold& m) {
  require_ctx(m.phi, contexts::xab(), "solution manifold");
  const TruncatedSeries& phi = m.phi;
  if (phi.trunc() < 2) throw TruncationError("solution manifold: truncation below weight 2");
  if (!weighted_component(phi, 0).is_zero() || !weighted_component(phi, 1).is_zero()) {
    throw DomainError("solution manifold: terms of weight below 2");
  }
  const int T = phi.trunc();
  TruncatedSeries model = var(contexts::xab(), "b", T) +
                          var(contexts::xab(), "a", T) * var(contexts::xab(), "x", T);
  if (!(weighted_component(phi, 2) == model)) {
    throw DomainError("solution manifold: weight-2 part is not b + a*x");
  }
}

PointMap identity_point_map(int trunc) {
  return {var(contexts::xy(), "x", trunc), var(contexts::xy(), "y", trunc)};
}

CoupledMap identity_coupled_map(int trunc) {
  return {var(contexts::xy(), "x", trunc), var(contexts::xy(), "y", trunc),
          var(contexts::ab(), "a", trunc), var(contexts::ab(), "b", trunc)};
}

PointMap compose(const PointMap& outer, const PointMap& inner) {
  Assignment xy{{"x", inner.f}, {"y", inner.g}};
  return {substitute(outer.f, xy), substitute(outer.g, xy)};
}

CoupledMap compose(const CoupledMap& outer, const CoupledMap& inner) {
  Assignment xy{{"x", inner.f}, {"y", inner.g}};
  Assignment ab{{"a", inner.lam}, {"b", inner.mu}};
  return {substitute(outer.f, xy), substitute(outer.g, xy), substitute(outer.lam, ab),
          substitute(outer.mu, ab)};
}

PointMap invert(const PointMap& h) {
  auto inv = invert_map({h.f, h.g}, {"x", "y"});
  return {inv[0], inv[1]};
}

SolutionManifold transport(const SolutionManifold& m, const CoupledMap& h) {
  require_ctx(m.phi, contexts::xab(), "transport");
  require_ctx(h.f, contexts::xy(), "transport");
  require_ctx(h.g, contexts::xy(), "transport");
  require_ctx(h.lam, contexts::ab(), "transport");
  require_ctx(h.mu, contexts::ab(), "transport");
  require_origin(h.f, "f");
  require_origin(h.g, "g");
  require_origin(h.lam, "lambda");
  require_origin(h.mu, "mu");

  const ContextPtr& xab = contexts::xab();
  const int W = m.phi.trunc();
  // Image of the graph: X = f(x, Phi), Y = g(x, Phi).
  Assignment graph{{"x", var(xab, "x", W)}, {"y", m.phi}};
  TruncatedSeries X = substitute(h.f, graph);
  TruncatedSeries Y = substitute(h.g, graph);

  // Express (a, b) through the target parameters.
  auto inv = invert_map({h.lam, h.mu}, {"a", "b"});
  Assignment params{{"x", var(xab, "x", W)},
                    {"a", embed(inv[0], xab, inv[0].trunc())},
                    {"b", embed(inv[1], xab, inv[1].trunc())}};
  X = substitute(X, params);
  Y = substitute(Y, params);

  // Solve X(x, a, b) = x' for x and read off y.
  TruncatedSeries xi = invert_in_x(X);
  Assignment back{{"x", xi}, {"a", var(xab, "a", W)}, {"b", var(xab, "b", W)}};
  return {substitute(Y, back)};
}

Recentered recenter(const OdeJet& ode, const std::array<Rational, 3>& p) {
  require_ctx(ode.F, contexts::xyu(), "recenter");
  const bool at_origin = sgn(p[0]) == 0 && sgn(p[1]) == 0 && sgn(p[2]) == 0;
  if (!at_origin && !ode.polynomial) {
    throw DomainError("recenter: moving the base point needs an exact polynomial");
  }
  const ContextPtr& xyu = contexts::xyu();
  const int T = ode.F.trunc();
  const SubstitutionMode mode =
      ode.polynomial ? SubstitutionMode::polynomial : SubstitutionMode::series;

  // k = F(p).
  Assignment point{{"x", TruncatedSeries::constant(xyu, T, p[0])},
                   {"y", TruncatedSeries::constant(xyu, T, p[1])},
                   {"u", TruncatedSeries::constant(xyu, T, p[2])}};
  Rational k = at_origin ? ode.F.constant_term()
                         : substitute(ode.F, point, SubstitutionMode::polynomial).constant_term();

  TruncatedSeries X = var(xyu, "x", T), Y = var(xyu, "y", T), U = var(xyu, "u", T);
  TruncatedSeries one = TruncatedSeries::constant(xyu, T, 1);
  Assignment shift{{"x", X + p[0] * one},
                   {"y", Y + p[1] * one + p[2] * X + (k / 2) * X * X},
                   {"u", U + p[2] * one + k * X}};
  TruncatedSeries F = substitute(ode.F, shift, mode) - k * one;

  // The shift is an exact polynomial of weight 2.
  const int TM = std::max(T, 2);
  const ContextPtr& xy = contexts::xy();
  TruncatedSeries x = var(xy, "x", TM), y = var(xy, "y", TM);
  TruncatedSeries one_xy = TruncatedSeries::constant(xy, TM, 1);
  TruncatedSeries dx = x - p[0] * one_xy;
  PointMap map{dx, y - p[1] * one_xy - p[2] * dx - (k / 2) * dx * dx};

  OdeJet out{truncate(F, T), p, ode.polynomial};
  return {std::move(out), std::move(map)};
}

SolutionManifold integrate_to_manifold(const OdeJet& jet, int weight) {
  require_ctx(jet.F, contexts::xyu(), "integrate_to_manifold");
  if (weight < 2) throw TruncationError("integrate_to_manifold: weight must be >= 2");
  const OdeJet ode = lift(jet, weight - 2);
  if (ode.F.trunc() < weight - 2) {
    throw TruncationError("integrate_to_manifold: F known to weight " +
                          std::to_string(ode.F.trunc()) + ", need " + std::to_string(weight - 2));
  }
  const ContextPtr& xab = contexts::xab();
  TruncatedSeries x = var(xab, "x", weight);
  TruncatedSeries model = var(xab, "b", weight) + var(xab, "a", weight) * x;
  TruncatedSeries F = truncate(ode.F, weight - 2);

  // Picard iteration; every pass fixes at least one more weight, so the early
  // passes run at a lower truncation.
  TruncatedSeries phi = model;
  auto step = [&](int L) {
    TruncatedSeries cur = truncate(phi, L);
    Assignment at{{"x", x}, {"y", cur}, {"u", differentiate(cur, "x")}};
    TruncatedSeries rhs = truncate(substitute(truncate(F, L - 2), at), L - 2);
    TruncatedSeries next = truncate(model, L) + antiderivative(antiderivative(rhs, "x"), "x");
    bool stable = next == phi;
    phi = std::move(next);
    return stable;
  };
  for (int L = 3; L < weight; ++L) step(L);
  for (int iter = 0; iter <= weight + 2; ++iter) {
    if (step(weight)) return {phi};
  }
  throw DomainError("integrate_to_manifold: iteration did not converge");
}

OdeJet manifold_to_ode(const SolutionManifold& m) {
  check_shape(m);
  const int T = m.phi.trunc();
  if (T < 2) throw TruncationError("manifold_to_ode: truncation below weight 2");
  const ContextPtr& xyu = contexts::xyu();
  // Solve Phi_x(x, a, b) = u, Phi(x, a, b) = y for (a, b), with x a parameter.
  auto inv = invert_map({differentiate(m.phi, "x"), m.phi}, {"a", "b"});
  TruncatedSeries A = relabel_xab_as_xyu(inv[0]);
  TruncatedSeries B = relabel_xab_as_xyu(inv[1]);
  TruncatedSeries x = var(xyu, "x", T);
  TruncatedSeries phixx = differentiate(differentiate(m.phi, "x"), "x");
  TruncatedSeries F = substitute(phixx, {{"x", x}, {"a", A}, {"b", B}});
  return OdeJet{truncate(F, T - 2), {}, false};
}

JetMap prolong_map(const PointMap& h) {
  require_ctx(h.f, contexts::xy(), "prolong_map");
  require_ctx(h.g, contexts::xy(), "prolong_map");
  const ContextPtr& xyu = contexts::xyu();
  TruncatedSeries f = embed(h.f, xyu, h.f.trunc());
  TruncatedSeries g = embed(h.g, xyu, h.g.trunc());
  const int T = std::min(f.trunc(), g.trunc()) - 1;
  if (T < 0) throw TruncationError("prolong_map: truncation too low");
  TruncatedSeries u = var(xyu, "u", T);
  TruncatedSeries den = truncate(differentiate(f, "x"), T);
  TruncatedSeries num = truncate(differentiate(g, "x"), T);
  if (f.trunc() >= 2) den = den + multiply_to(differentiate(f, "y"), u, T);
  if (g.trunc() >= 2) num = num + multiply_to(differentiate(g, "y"), u, T);
  if (sgn(den.constant_term()) == 0) {
    throw DomainError("prolong_map: f_x(0, 0) = 0, prolongation is not a graph over u");
  }
  return {f, g, multiply(num, reciprocal(den))};
}

OdeJet transform_ode(const OdeJet& ode, const PointMap& h, int weight) {
  require_ctx(h.f, contexts::xy(), "transform_ode");
  require_ctx(h.g, contexts::xy(), "transform_ode");
  require_origin(h.f, "f");
  require_origin(h.g, "g");
  if (sgn(h.g.coeff({1, 0})) != 0) {
    throw DomainError("transform_ode: g_x(0, 0) != 0, the map moves the origin of J^1");
  }
  if (sgn(h.f.coeff({1, 0})) == 0 || sgn(h.g.coeff({0, 1})) == 0) {
    throw DomainError("transform_ode: map is not invertible at the origin");
  }
  const ContextPtr& ab = contexts::ab();
  const ContextPtr& xab = contexts::xab();
  SolutionManifold M = integrate_to_manifold(ode, weight + 2);
  const int P = M.phi.trunc();
  SolutionManifold raw =
      transport(M, CoupledMap{h.f, h.g, var(ab, "a", P), var(ab, "b", P)});

  // Relabel the image solutions by their 1-jet at x = 0.
  TruncatedSeries A = at_x_zero(differentiate(raw.phi, "x"));
  TruncatedSeries B = at_x_zero(raw.phi);
  auto inv = invert_map({A, B}, {"a", "b"});
  TruncatedSeries phi =
      substitute(raw.phi, {{"x", var(xab, "x", raw.phi.trunc())},
                           {"a", embed(inv[0], xab, inv[0].trunc())},
                           {"b", embed(inv[1], xab, inv[1].trunc())}});

  // Remove a nonzero value at the origin by y -> y - c x^2.
  Rational c = phi.coeff({2, 0, 0});
  if (sgn(c) != 0) {
    phi = phi - c * TruncatedSeries::monomial(xab, phi.trunc(), {2, 0, 0}, Rational(1));
  }
  OdeJet out = manifold_to_ode({phi});
  if (out.F.trunc() < weight) {
    throw TruncationError("transform_ode: map known only to weight " +
                          std::to_string(out.F.trunc() + 2));
  }
  return OdeJet{truncate(out.F, weight), {}, false};
}

}  // namespace odenorm
