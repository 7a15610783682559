#include "doctest.h"
#include "odenorm/error.hpp"
#include "odenorm/expr.hpp"
#include "odenorm/normalform.hpp"
#include "support.hpp"

using namespace odenorm;
using namespace odenorm::testing;

namespace {

OdeJet jet(const char* text, int W) { return make_jet(parse_ode(text, W)); }

TruncatedSeries xab(const char* text, int W) {
  return with_trunc(parse_polynomial(text, contexts::xab()), W);
}

TruncatedSeries xy(const char* text, int W) {
  return with_trunc(parse_polynomial(text, contexts::xy()), W);
}

TruncatedSeries ab(const char* text, int W) {
  return with_trunc(parse_polynomial(text, contexts::ab()), W);
}

CoupledMap deviation(const char* f, const char* g, const char* lam, const char* mu, int W) {
  return {xy(f, W), xy(g, W), ab(lam, W), ab(mu, W)};
}

/// All coefficients of s at constrained positions vanish.
bool in_normal_space(const TruncatedSeries& s) {
  for (const auto& t : s.terms())
    if (is_constrained(t.mono[0], t.mono[1])) return false;
  return true;
}

/// Random weight-m homogeneous series in (x, a, b).
TruncatedSeries random_homogeneous(std::mt19937& rng, int m, int trunc) {
  std::vector<std::pair<Monomial, Rational>> terms;
  for (int j = 0; 2 * j <= m; ++j)
    for (int k = 0; k + 2 * j <= m; ++k) {
      int l = m - 2 * j - k;
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) continue;
      terms.push_back({Monomial{k, l, j}, random_rational(rng)});
    }
  return TruncatedSeries::from_terms(contexts::xab(), trunc, std::move(terms));
}

/// f_x = f_y = f_xx = g_x = g_y = g_yy = 0 and f, g vanish at the origin.
void check_f3_normalization(const CoupledMap& d) {
  for (auto m : {Monomial{0, 0}, Monomial{1, 0}, Monomial{0, 1}, Monomial{2, 0}}) {
    CHECK(d.f.coeff(m) == 0);
  }
  for (auto m : {Monomial{0, 0}, Monomial{1, 0}, Monomial{0, 1}, Monomial{0, 2}}) {
    CHECK(d.g.coeff(m) == 0);
  }
}

/// Reads the (g0)/(g+) parameters off the 2-jet of a projective map.
NormalizationParams params_of(const PointMap& h) {
  NormalizationParams p;
  p.s = h.f.coeff({1, 0});
  p.alpha = h.f.coeff({0, 1}) / p.s;
  p.beta = h.f.coeff({2, 0}) / (2 * p.s);
  p.t = h.g.coeff({0, 1}) / p.s;
  p.r = -h.g.coeff({0, 2}) / (p.s * p.t) - p.alpha * p.beta;
  return p;
}

NormalizationParams random_params(std::mt19937& rng) {
  NormalizationParams p;
  do p.s = random_rational(rng, 3); while (sgn(p.s) == 0);
  do p.t = random_rational(rng, 3); while (sgn(p.t) == 0);
  p.alpha = random_rational(rng, 2);
  p.beta = random_rational(rng, 2);
  p.r = random_rational(rng, 2);
  return p;
}

}  // namespace

TEST_CASE("homological operator examples") {
  const int W = 8;
  CHECK(homological_operator(deviation("0", "0", "0", "0", W)).is_zero());
  CHECK(homological_operator(deviation("-y^2", "0", "2*b*a^2", "a*b^2", W)) == xab("x^2*a^3", W));
  CHECK(homological_operator(deviation("-2*y*x^2", "-y^2*x", "-b^2", "0", W)) ==
        xab("x^3*a^2", W));
}

TEST_CASE("homological solve examples") {
  const int W = 8;
  auto d1 = homological_solve(xab("x^2*a^3", W));
  CHECK(d1.f == xy("-y^2", W));
  CHECK(d1.g.is_zero());
  CHECK(d1.lam == ab("2*b*a^2", W));
  CHECK(d1.mu == ab("a*b^2", W));

  auto d2 = homological_solve(xab("x^3*a^2", W));
  CHECK(d2.f == xy("-2*y*x^2", W));
  CHECK(d2.g == xy("-y^2*x", W));
  CHECK(d2.lam == ab("-b^2", W));
  CHECK(d2.mu.is_zero());

  CHECK_THROWS_AS(homological_solve(xab("x^3 + x^4", W)), DomainError);
  CHECK_THROWS_AS(homological_solve(xab("x^2", W)), DomainError);
  CHECK_THROWS_AS(homological_solve(xy("x^3", W)), ContextError);
}

TEST_CASE("property: the solver inverts the operator modulo N") {
  std::mt19937 rng(51);
  for (int n = 0; n < 200; ++n) {
    int m = 3 + n % 7;
    auto psi = random_homogeneous(rng, m, m + 1);
    if (psi.is_zero()) continue;
    auto d = homological_solve(psi);
    check_f3_normalization(d);
    auto residual = homological_operator(d) - psi;
    CHECK(in_normal_space(residual));
    CHECK(weighted_component(residual, m) == residual);
  }
}

TEST_CASE("property: the solver is linear and projects") {
  std::mt19937 rng(52);
  for (int n = 0; n < 40; ++n) {
    int m = 3 + n % 7;
    auto p1 = random_homogeneous(rng, m, m + 1);
    auto p2 = random_homogeneous(rng, m, m + 1);
    if (p1.is_zero() || p2.is_zero() || (p1 + p2).is_zero()) continue;
    auto d1 = homological_solve(p1), d2 = homological_solve(p2), d12 = homological_solve(p1 + p2);
    CHECK(d12.f == d1.f + d2.f);
    CHECK(d12.g == d1.g + d2.g);
    CHECK(d12.lam == d1.lam + d2.lam);
    CHECK(d12.mu == d1.mu + d2.mu);

    // L o solve is a projection: applying it to its own output changes nothing.
    auto image = homological_operator(d1);
    if (image.is_zero()) continue;
    auto again = homological_solve(image);
    CHECK(homological_operator(again) == image);
  }
}

TEST_CASE("model automorphisms") {
  const int W = 8;
  auto id = model_automorphism({}, W);
  CHECK(id.f == xy("x", W));
  CHECK(id.g == xy("y", W));
  CHECK(id.lam == ab("a", W));
  CHECK(id.mu == ab("b", W));

  auto sc = model_automorphism({2, 3, 0, 0, 0}, W);
  CHECK(sc.f == xy("2*x", W));
  CHECK(sc.g == xy("6*y", W));
  CHECK(sc.lam == ab("3*a", W));
  CHECK(sc.mu == ab("6*b", W));

  auto al = model_automorphism({1, 1, Rational(1, 2), 0, 0}, W);
  CHECK(al.f.coeff({0, 1}) == Rational(1, 2));
  CHECK(al.g.coeff({0, 2}) == 0);

  CHECK_THROWS_AS(model_automorphism({0, 1, 0, 0, 0}, W), DomainError);
  CHECK_THROWS_AS(model_automorphism({1, 0, 0, 0, 0}, W), DomainError);
}

TEST_CASE("property: model automorphisms preserve the quadric") {
  std::mt19937 rng(53);
  for (int n = 0; n < 20; ++n) {
    const int W = 9;
    auto h = model_automorphism(random_params(rng), W);
    auto q = transport({xab("b + a*x", W)}, h);
    CHECK(q.phi == xab("b + a*x", W));
  }
}

TEST_CASE("normal conditions") {
  CHECK(check_normal_conditions({xab("b + a*x", 8)}).empty());
  auto v = check_normal_conditions({xab("b + a*x + x^2*a^2", 8)});
  REQUIRE(v.size() == 1);
  CHECK(v[0].k == 2);
  CHECK(v[0].l == 2);
  auto w = check_normal_conditions({xab("b + a*x + b*x", 8)});
  REQUIRE(w.size() == 1);
  CHECK(w[0].k == 1);
  CHECK(w[0].l == 0);
  CHECK(w[0].rule == "Phi_k0 = 0");
  CHECK(check_normal_conditions({xab("b + a*x + x^4*a^2 + x^2*a^4*b", 8)}).empty());
}

TEST_CASE("normalize_manifold examples") {
  const int W = 8;
  auto quad = normalize_manifold({xab("b + a*x", W)}, W);
  CHECK(quad.phiN.phi == xab("b + a*x", W));
  CHECK(quad.map.f == xy("x", W + 1));
  CHECK(quad.map.g == xy("y", W + 1));

  auto sq = normalize_manifold(integrate_to_manifold(jet("u^2", W), W), W);
  CHECK(sq.phiN.phi == xab("b + a*x", W));

  auto already = xab("b + a*x + 1/12*x^4*a^2", W);
  auto nf = normalize_manifold({already}, W);
  CHECK(nf.phiN.phi == already);
  CHECK(nf.map.f == xy("x", W + 1));
  CHECK(nf.map.g == xy("y", W + 1));
  CHECK(nf.map.lam == ab("a", W + 1));
  CHECK(nf.map.mu == ab("b", W + 1));

  CHECK_THROWS_AS(normalize_manifold({xab("b + a*x", 6)}, 8), TruncationError);
}

TEST_CASE("normal_form_ode examples") {
  const int W = 10;
  CHECK(normal_form_ode(jet("0", W), W).N.F.is_zero());
  CHECK(normal_form_ode(jet("x*y*u^3", W), W).N.F.is_zero());
  auto x2u2 = normal_form_ode(jet("x^2*u^2", W), W);
  CHECK(x2u2.N.F == parse_ode("x^2*u^2", W - 2));
}

TEST_CASE("property: normal forms satisfy the conditions and the basic identity") {
  std::mt19937 rng(54);
  const auto& XYU = contexts::xyu();
  for (int n = 0; n < 10; ++n) {
    const int W = 9;
    auto F = random_series(rng, XYU, W, 1, W, 8);
    auto M = integrate_to_manifold(make_jet(F), W);
    auto p = n % 2 ? random_params(rng) : NormalizationParams{};
    auto nf = normalize_manifold(M, W, p);
    CHECK(check_normal_conditions(nf.phiN).empty());
    CHECK(transport(M, nf.map).phi == nf.phiN.phi);

    // The ODE side has no x^k, x^k u, u^2, u^3, x u^2, x u^3 terms.
    auto N = manifold_to_ode(nf.phiN).F;
    for (const auto& t : N.terms()) {
      int k = t.mono[0], l = t.mono[2];
      CHECK(t.mono[1] + l >= 1);
      bool forbidden = (t.mono[1] == 0) && (l <= 1 || (k <= 1 && (l == 2 || l == 3)));
      CHECK_FALSE(forbidden);
    }
  }
}

TEST_CASE("property: normalization is idempotent") {
  std::mt19937 rng(55);
  const auto& XYU = contexts::xyu();
  for (int n = 0; n < 6; ++n) {
    const int W = 9;
    auto F = random_series(rng, XYU, W, 1, W, 8);
    auto nf = normalize_manifold(integrate_to_manifold(make_jet(F), W), W);
    auto again = normalize_manifold(nf.phiN, W);
    CHECK(again.phiN.phi == nf.phiN.phi);
    CHECK(again.map.f == xy("x", W + 1));
    CHECK(again.map.g == xy("y", W + 1));
    CHECK(again.map.lam == ab("a", W + 1));
    CHECK(again.map.mu == ab("b", W + 1));
  }
}

TEST_CASE("property: normal forms are invariant under projective maps") {
  std::mt19937 rng(56);
  const auto& XYU = contexts::xyu();
  for (int n = 0; n < 6; ++n) {
    const int W = 8;
    auto F = make_jet(random_series(rng, XYU, W + 2, 1, 6, 6));
    auto q = random_params(rng);
    auto hc = model_automorphism(q, W + 2);
    PointMap h{hc.f, hc.g};
    auto F2 = transform_ode(F, h, W);
    auto hinv = invert(h);
    auto q2 = params_of(hinv);
    auto check = model_automorphism(q2, W + 2);
    REQUIRE(check.f == hinv.f);
    REQUIRE(check.g == hinv.g);
    auto n1 = normalize_manifold(integrate_to_manifold(F, W), W);
    auto n2 = normalize_manifold(integrate_to_manifold(F2, W), W, q2);
    CHECK(n1.phiN.phi == n2.phiN.phi);
  }
}

TEST_CASE("property: invariants at the origin from normal form coefficients") {
  std::mt19937 rng(57);
  const auto& XYU = contexts::xyu();
  for (int n = 0; n < 8; ++n) {
    const int W = 10;
    auto F = random_series(rng, XYU, W, 1, W, 8);
    auto nf = normal_form_ode(make_jet(F), W);
    auto c = classify_point(nf.N);
    CHECK(c.I1_at == 48 * coefficient_at_origin(nf.manifold.phiN, 2, 4));
    CHECK(c.I2_at == 48 * coefficient_at_origin(nf.manifold.phiN, 4, 2));
    CHECK(c.I1_at == 24 * nf.N.F.coeff({0, 0, 4}));
    CHECK(c.I2_at == 4 * nf.N.F.coeff({2, 0, 2}));
  }
}
