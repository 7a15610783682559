#pragma once

// Weight-by-weight normalization of solution manifolds, special normal forms
// at strongly nonflat points, and the equivalence test built on them.
//
// Coefficient notation: Phi(x, a, b) = sum_{k,l} Phi_kl(b) x^k a^l.
// The normal-form space N consists of the series (beyond b + a x) with
//   Phi_k0 = Phi_0l = Phi_k1 = Phi_1l = 0 and Phi_22 = Phi_23 = Phi_32 = Phi_33 = 0.

#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "odenorm/bigfloat.hpp"
#include "odenorm/invariants.hpp"
#include "odenorm/solutions.hpp"

namespace odenorm {

/// Parameters of the projective automorphism applied before normalizing:
/// x -> s x, y -> s t y after x -> (x + alpha y) / D, y -> y / D with
/// D = 1 - 2 beta x + (r + alpha beta) y.
struct NormalizationParams {
  Rational s{1};
  Rational t{1};
  Rational alpha{0};
  Rational beta{0};
  Rational r{0};
};

/// True iff (k, l) is one of the coefficients forced to vanish in N.
bool is_constrained(int k, int l);

/// L(f, g, lam, mu) = g(x, b + a x) - mu(a, b) - a f(x, b + a x) - x lam(a, b).
TruncatedSeries homological_operator(const CoupledMap& d);

/// The unique deviation (f_{m-1}, g_m, lam_{m-1}, mu_m), normalized by
/// f_x = f_y = f_xx = g_x = g_y = g_yy = 0 at the origin, with
/// L(deviation) = psi mod N. psi must be homogeneous of weight m >= 3.
CoupledMap homological_solve(const TruncatedSeries& psi);

/// The projective automorphism of the model b + a x with parameters p,
/// expanded to weight `trunc`.
CoupledMap model_automorphism(const NormalizationParams& p, int trunc);

struct NormalFormResult {
  SolutionManifold phiN;
  CoupledMap map;
  NormalizationParams params;
  int weight = 0;
};

/// Brings m into N up to weight W, starting from model_automorphism(p).
NormalFormResult normalize_manifold(const SolutionManifold& m, int weight,
                                    const NormalizationParams& p = {});

struct Violation {
  int k;
  int l;
  std::string rule;
};

/// The coefficients Phi_kl that keep phi - (b + a x) out of N.
std::vector<Violation> check_normal_conditions(const SolutionManifold& m);

struct OdeNormalForm {
  OdeJet N;
  PointMap map;
  NormalFormResult manifold;
};

/// Normal form of y'' = F (with F(0) = 0) to weight W; N is exact to W - 2.
OdeNormalForm normal_form_ode(const OdeJet& ode, int weight, const NormalizationParams& p = {});

/// Phi_kl(0): coefficient of x^k a^l b^0.
Rational coefficient_at_origin(const SolutionManifold& m, int k, int l);

struct FloatTerm {
  Monomial mono;
  BigFloat value;
};

struct SpecialForm {
  explicit SpecialForm(NormalFormResult e) : exact(std::move(e)) {}

  /// Exact normal form with s = t = 1 and alpha, beta, r fixed.
  NormalFormResult exact;
  /// Scaled coefficients of phiN in canonical order, including b + a x.
  std::vector<FloatTerm> coeffs;
  /// Sign of Phi_24(0) after Phi_42(0) = 1 is achieved.
  int epsilon = 1;
  /// Scaling parameters s, t of the final normal form.
  BigFloat s;
  BigFloat t;
  /// No coefficient with odd k + l: both representatives coincide.
  bool z2_symmetric = false;
  int precision = 0;
  int weight = 0;
};

/// Special normal form at a strongly nonflat point: Phi_42(0) = 1,
/// Phi_24(0) = epsilon, Phi_43(0) = Phi_34(0) = Phi_53(0) = 0, with the
/// representative of the x -> -x, a -> -a symmetry fixed by the sign of the
/// first nonzero coefficient with odd k + l.
SpecialForm special_normalize(const OdeJet& ode, int weight, int precision);

enum class VerdictKind { inequivalent, equivalent_to_weight, both_flat_to_weight, undecided };

struct Witness {
  std::string what;
  std::optional<Monomial> mono;
  std::string value1;
  std::string value2;
  std::string gap;
};

struct Verdict {
  VerdictKind kind;
  int weight = 0;
  std::optional<Witness> witness;
  std::string reason;
};

Verdict decide_equivalence(const OdeJet& f1, const OdeJet& f2, int weight, int precision);

std::string to_string(VerdictKind kind);

}  // namespace odenorm
