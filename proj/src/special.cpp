#include <cmath>
#include <map>

#include "odenorm/error.hpp"
#include "odenorm/normalform.hpp"

namespace odenorm {

namespace {

BigFloat ipow(const BigFloat& v, int n) {
  BigFloat r = 1;
  BigFloat base = n < 0 ? BigFloat(1 / v) : v;
  for (int i = 0; i < std::abs(n); ++i) r *= base;
  return r;
}

BigFloat tolerance(int precision) {
  return boost::multiprecision::pow(BigFloat(10), -(precision / 2));
}

}  // namespace

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::inequivalent: return "INEQUIVALENT";
    case VerdictKind::equivalent_to_weight: return "EQUIVALENT_TO_WEIGHT";
    case VerdictKind::both_flat_to_weight: return "BOTH_FLAT_TO_WEIGHT";
    case VerdictKind::undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

SpecialForm special_normalize(const OdeJet& ode, int weight, int precision) {
  if (weight < 8) throw DomainError("special normal form needs weight >= 8");
  if (precision < 10) throw DomainError("special normal form needs precision >= 10 digits");
  auto cls = classify_point(ode);
  if (cls.kind != PointKind::strongly_nonflat)
    throw DomainError("point is " + to_string(cls.kind) + ", not strongly-nonflat");

  const auto M = integrate_to_manifold(ode, weight);
  auto at = [&](const Rational& alpha, const Rational& beta, const Rational& r) {
    return normalize_manifold(M, weight, {1, 1, alpha, beta, r});
  };
  auto c = [](const NormalFormResult& n, int k, int l) {
    return coefficient_at_origin(n.phiN, k, l);
  };

  // (Phi_43(0), Phi_34(0)) is affine in (alpha, beta) and independent of r.
  auto n0 = at(0, 0, 0), na = at(1, 0, 0), nb = at(0, 1, 0);
  Rational u0 = c(n0, 4, 3), v0 = c(n0, 3, 4);
  Rational ua = c(na, 4, 3) - u0, va = c(na, 3, 4) - v0;
  Rational ub = c(nb, 4, 3) - u0, vb = c(nb, 3, 4) - v0;
  Rational det = ua * vb - ub * va;
  if (sgn(det) == 0) throw DomainError("degenerate alpha, beta dependence");
  Rational alpha = (-u0 * vb + ub * v0) / det;
  Rational beta = (-ua * v0 + u0 * va) / det;

  // Phi_53(0) is affine in r.
  auto r0 = at(alpha, beta, 0), r1 = at(alpha, beta, 1);
  Rational w0 = c(r0, 5, 3), w1 = c(r1, 5, 3);
  if (w1 == w0) throw DomainError("degenerate r dependence");
  Rational r = -w0 / (w1 - w0);

  SpecialForm out{at(alpha, beta, r)};
  if (sgn(c(out.exact, 4, 3)) != 0 || sgn(c(out.exact, 3, 4)) != 0 ||
      sgn(c(out.exact, 5, 3)) != 0)
    throw DomainError("parameter laws are not affine at this point");

  const Rational P = c(out.exact, 4, 2), Q = c(out.exact, 2, 4);
  if (sgn(P) == 0 || sgn(Q) == 0) throw DomainError("vanishing Phi_42(0) or Phi_24(0)");

  PrecisionScope scope(precision + 10);
  out.epsilon = sgn(P) * sgn(Q);
  out.precision = precision;
  out.weight = weight;

  // Scaling x -> s x, y -> s t y multiplies the x^k a^l b^j coefficient by
  // sigma^(k+j-1) tau^(l+j-1) with sigma = 1/s, tau = 1/t.
  BigFloat PQ = abs(to_float(P * Q));
  BigFloat st = sgn(P) / sqrt(sqrt(PQ));
  BigFloat sigma = sqrt(1 / (to_float(P) * st));
  BigFloat tau = st / sigma;

  auto sign_of = [&](const Term& term) {
    int k = term.mono[0], l = term.mono[1], j = term.mono[2];
    int sg = sgn(term.coeff);
    if ((l + j - 1) % 2 != 0 && tau < 0) sg = -sg;
    if ((k + j - 1) % 2 != 0 && sigma < 0) sg = -sg;
    return sg;
  };
  out.z2_symmetric = true;
  for (const auto& term : out.exact.phiN.phi.terms()) {
    if ((term.mono[0] + term.mono[1]) % 2 == 0) continue;
    out.z2_symmetric = false;
    if (sign_of(term) < 0) {
      sigma = -sigma;
      tau = -tau;
    }
    break;
  }
  out.s = 1 / sigma;
  out.t = 1 / tau;

  for (const auto& term : out.exact.phiN.phi.terms()) {
    int k = term.mono[0], l = term.mono[1], j = term.mono[2];
    out.coeffs.push_back(
        {term.mono, to_float(term.coeff) * ipow(sigma, k + j - 1) * ipow(tau, l + j - 1)});
  }

  BigFloat tol = tolerance(precision);
  auto value = [&](int k, int l) {
    for (const auto& ft : out.coeffs)
      if (ft.mono[0] == k && ft.mono[1] == l && ft.mono[2] == 0) return ft.value;
    return BigFloat(0);
  };
  if (abs(value(4, 2) - 1) > tol || abs(value(2, 4) - out.epsilon) > tol)
    throw DomainError("precision exhausted");
  return out;
}

Verdict decide_equivalence(const OdeJet& f1, const OdeJet& f2, int weight, int precision) {
  auto c1 = classify_point(f1), c2 = classify_point(f2);
  auto flat = [](const OdeJet& f, const PointClass& c) {
    if (c.kind != PointKind::flat) return false;
    auto inv = tresse_invariants(f);
    return inv.I1.is_zero() && inv.I2.is_zero();
  };
  if (flat(f1, c1) && flat(f2, c2))
    return {VerdictKind::both_flat_to_weight, weight, std::nullopt,
            "both invariants vanish identically"};
  if (c1.kind != c2.kind)
    return {VerdictKind::inequivalent, weight,
            Witness{"point class", std::nullopt, to_string(c1.kind), to_string(c2.kind), ""},
            "different point classes"};
  if (c1.kind != PointKind::strongly_nonflat)
    return {VerdictKind::undecided, weight, std::nullopt,
            "no canonical form at " + to_string(c1.kind) + " points"};

  auto s1 = special_normalize(f1, weight, precision);
  auto s2 = special_normalize(f2, weight, precision);
  if (s1.epsilon != s2.epsilon)
    return {VerdictKind::inequivalent, weight,
            Witness{"epsilon", std::nullopt, std::to_string(s1.epsilon),
                    std::to_string(s2.epsilon), ""},
            "different epsilon"};

  PrecisionScope scope(precision + 10);
  std::map<Monomial, std::pair<BigFloat, BigFloat>> table;
  for (const auto& ft : s1.coeffs) table[ft.mono].first = ft.value;
  for (const auto& ft : s2.coeffs) table[ft.mono].second = ft.value;

  struct Gap {
    BigFloat size = 0;
    Monomial mono;
    BigFloat v1 = 0, v2 = 0;
  };
  // Compare against both representatives of the second form.
  auto largest_gap = [&](bool flip) {
    Gap g;
    for (const auto& [mono, vals] : table) {
      BigFloat v2 = vals.second;
      if (flip && (mono[0] + mono[1]) % 2 != 0) v2 = -v2;
      BigFloat d = abs(vals.first - v2);
      if (d > g.size) g = {d, mono, vals.first, v2};
    }
    return g;
  };
  Gap direct = largest_gap(false), flipped = largest_gap(true);
  const Gap& best = flipped.size < direct.size ? flipped : direct;
  if (best.size <= tolerance(precision))
    return {VerdictKind::equivalent_to_weight, weight, std::nullopt,
            "special normal forms agree"};
  const int digits = std::min(precision, 30);
  return {VerdictKind::inequivalent, weight,
          Witness{"coefficient", best.mono, format_float(best.v1, digits),
                  format_float(best.v2, digits), format_float(best.size, 6)},
          "special normal forms differ"};
}

}  // namespace odenorm
