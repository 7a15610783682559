#include "odenorm/normalform.hpp"

#include <map>

#include "odenorm/error.hpp"

namespace odenorm {

namespace {

// Polynomial in b, coefficients by degree.
using Poly1 = std::vector<Rational>;

Poly1 d(const Poly1& p) {
  Poly1 r;
  for (std::size_t j = 1; j < p.size(); ++j) r.push_back(Rational(static_cast<long>(j)) * p[j]);
  return r;
}

Poly1 integral(const Poly1& p, const Rational& c0 = 0) {
  Poly1 r{c0};
  for (std::size_t j = 0; j < p.size(); ++j)
    r.push_back(p[j] / Rational(static_cast<long>(j + 1)));
  return r;
}

Poly1 operator+(Poly1 a, const Poly1& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) a[j] += b[j];
  return a;
}

Poly1 operator*(const Rational& c, Poly1 a) {
  for (auto& v : a) v *= c;
  return a;
}

Poly1 operator-(const Poly1& a, const Poly1& b) { return a + Rational(-1) * b; }
Poly1 operator-(const Poly1& a) { return Rational(-1) * a; }

Rational at0(const Poly1& p) { return p.empty() ? Rational(0) : p[0]; }

// Psi_kl(b) for a series in (x, a, b).
class CoefficientTable {
 public:
  explicit CoefficientTable(const TruncatedSeries& psi) {
    for (const auto& t : psi.terms()) {
      auto& p = table_[{t.mono[0], t.mono[1]}];
      std::size_t j = static_cast<std::size_t>(t.mono[2]);
      if (p.size() <= j) p.resize(j + 1);
      p[j] = t.coeff;
    }
  }
  Poly1 operator()(int k, int l) const {
    auto it = table_.find({k, l});
    return it == table_.end() ? Poly1{} : it->second;
  }

 private:
  std::map<std::pair<int, int>, Poly1> table_;
};

// sum_i coeffs[i](second var) * (first var)^i in a two-variable context.
TruncatedSeries assemble(const ContextPtr& ctx, int trunc, const std::vector<Poly1>& coeffs) {
  std::vector<std::pair<Monomial, Rational>> terms;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    for (std::size_t j = 0; j < coeffs[i].size(); ++j)
      if (sgn(coeffs[i][j]) != 0)
        terms.push_back({Monomial{static_cast<int>(i), static_cast<int>(j)}, coeffs[i][j]});
  return TruncatedSeries::from_terms(ctx, trunc, std::move(terms));
}

TruncatedSeries var(const ContextPtr& ctx, const char* name, int trunc) {
  return TruncatedSeries::variable(ctx, name, trunc);
}

}  // namespace

bool is_constrained(int k, int l) {
  if (k <= 1 || l <= 1) return true;
  return (k == 2 || k == 3) && (l == 2 || l == 3);
}

TruncatedSeries homological_operator(const CoupledMap& dev) {
  const auto& XAB = contexts::xab();
  int T = std::min({dev.f.trunc(), dev.g.trunc(), dev.lam.trunc(), dev.mu.trunc()});
  auto x = var(XAB, "x", T), a = var(XAB, "a", T), b = var(XAB, "b", T);
  Assignment line{{"x", x}, {"y", b + a * x}};
  Assignment params{{"a", a}, {"b", b}};
  auto G = substitute(dev.g, line, SubstitutionMode::polynomial);
  auto F = substitute(dev.f, line, SubstitutionMode::polynomial);
  auto L = substitute(dev.lam, params, SubstitutionMode::polynomial);
  auto M = substitute(dev.mu, params, SubstitutionMode::polynomial);
  return truncate(G - M - a * F - x * L, T);
}

CoupledMap homological_solve(const TruncatedSeries& psi) {
  if (!same_context(psi.ctx(), contexts::xab()))
    throw ContextError("homological_solve expects a series in (x, a, b)");
  if (psi.is_zero()) throw DomainError("homological_solve: zero input has no weight");
  const int m = psi.valuation();
  if (psi.max_weight() != m) throw DomainError("non-homogeneous input");
  if (m < 3) throw DomainError("homological_solve needs weight >= 3");

  CoefficientTable P(psi);
  const int n = m + 1;
  std::vector<Poly1> f(n), g(n), lam(n), mu(n);

  for (int k = 2; k < n; ++k) g[k] = P(k, 0);
  for (int k = 3; k < n; ++k) f[k] = d(g[k - 1]) - P(k, 1);
  for (int l = 3; l < n; ++l) lam[l] = -P(1, l);
  for (int l = 2; l < n; ++l) mu[l] = -P(0, l);

  // f_0'' = -2 Psi_23 with f_0(0) = f_0'(0) = 0.
  f[0] = integral(integral(Rational(-2) * P(2, 3)));
  // g_0''' = 6 Psi_22' - 12 Psi_33, g_0 = O(b^3); f_1' = g_0''/2 - Psi_22.
  g[0] = integral(integral(integral(Rational(6) * d(P(2, 2)) - Rational(12) * P(3, 3))));
  f[1] = integral(Rational(1, 2) * d(d(g[0])) - P(2, 2));
  // g_1'' = 2 (Psi_21' - Psi_32), g_1(0) = 0, g_1'(0) = Psi_21(0) so f_2(0) = 0.
  g[1] = integral(integral(Rational(2) * (d(P(2, 1)) - P(3, 2)), at0(P(2, 1))));
  f[2] = d(g[1]) - P(2, 1);

  lam[0] = g[1] - P(1, 0);
  mu[0] = g[0] - P(0, 0);
  mu[1] = -f[0] - P(0, 1);
  lam[1] = d(g[0]) - f[1] - P(1, 1);
  lam[2] = -d(f[0]) - P(1, 2);

  const int T = psi.trunc();
  return {assemble(contexts::xy(), T, f), assemble(contexts::xy(), T, g),
          assemble(contexts::ab(), T, lam), assemble(contexts::ab(), T, mu)};
}

CoupledMap model_automorphism(const NormalizationParams& p, int trunc) {
  if (sgn(p.s) == 0 || sgn(p.t) == 0) throw DomainError("normalization needs s, t nonzero");
  const auto& XY = contexts::xy();
  const auto& AB = contexts::ab();
  const int T = trunc;
  auto x = var(XY, "x", T), y = var(XY, "y", T);
  auto a = var(AB, "a", T), b = var(AB, "b", T);
  auto one_xy = TruncatedSeries::constant(XY, T, 1);
  auto one_ab = TruncatedSeries::constant(AB, T, 1);

  auto Dinv = reciprocal(one_xy - Rational(2) * p.beta * x + (p.r + p.alpha * p.beta) * y);
  auto Einv = reciprocal(one_ab + p.alpha * a + (p.r + 3 * p.alpha * p.beta) * b);
  Rational st = p.s * p.t;
  return {p.s * ((x + p.alpha * y) * Dinv), st * (y * Dinv),
          p.t * ((a + Rational(2) * p.beta * b) * Einv), st * (b * Einv)};
}

NormalFormResult normalize_manifold(const SolutionManifold& m, int weight,
                                    const NormalizationParams& p) {
  check_shape(m);
  if (weight < 3) throw DomainError("normalization weight must be at least 3");
  if (m.phi.trunc() < weight)
    throw TruncationError("manifold known to weight " + std::to_string(m.phi.trunc()) +
                          ", normalization needs " + std::to_string(weight));
  const int T = weight + 1;
  CoupledMap H = model_automorphism(p, T);
  SolutionManifold cur = transport({truncate(m.phi, weight)}, H);
  for (int k = 3; k <= weight; ++k) {
    auto psi = weighted_component(cur.phi, k);
    if (psi.is_zero()) continue;
    auto dev = homological_solve(with_trunc(-psi, T));
    CoupledMap C = identity_coupled_map(T);
    C.f = C.f + dev.f;
    C.g = C.g + dev.g;
    C.lam = C.lam + dev.lam;
    C.mu = C.mu + dev.mu;
    cur = transport(cur, C);
    H = compose(C, H);
  }
  return {cur, H, p, weight};
}

std::vector<Violation> check_normal_conditions(const SolutionManifold& m) {
  const auto& XAB = contexts::xab();
  if (!same_context(m.phi.ctx(), XAB)) throw ContextError("manifold must live in (x, a, b)");
  const int T = m.phi.trunc();
  auto N = m.phi - var(XAB, "b", T) - var(XAB, "a", T) * var(XAB, "x", T);
  std::map<std::pair<int, int>, bool> seen;
  std::vector<Violation> out;
  for (const auto& t : N.terms()) {
    int k = t.mono[0], l = t.mono[1];
    if (!is_constrained(k, l) || seen[{k, l}]) continue;
    seen[{k, l}] = true;
    std::string rule;
    if (l == 0) rule = "Phi_k0 = 0";
    else if (k == 0) rule = "Phi_0l = 0";
    else if (l == 1) rule = "Phi_k1 = 0";
    else if (k == 1) rule = "Phi_1l = 0";
    else rule = "Phi_" + std::to_string(k) + std::to_string(l) + " = 0";
    out.push_back({k, l, rule});
  }
  return out;
}

OdeNormalForm normal_form_ode(const OdeJet& ode, int weight, const NormalizationParams& p) {
  auto M = integrate_to_manifold(ode, weight);
  auto nf = normalize_manifold(M, weight, p);
  auto N = manifold_to_ode(nf.phiN);
  PointMap h{nf.map.f, nf.map.g};
  return {N, h, std::move(nf)};
}

Rational coefficient_at_origin(const SolutionManifold& m, int k, int l) {
  return m.phi.coeff(Monomial{k, l, 0});
}

}  // namespace odenorm
