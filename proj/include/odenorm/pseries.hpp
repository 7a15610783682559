#pragma once

// Exact sparse multivariate power series with weighted truncation.
//
// A series lives in a VarContext (ordered variable names with positive
// integer weights) and carries a truncation weight W: every monomial of
// weight <= W is known exactly, nothing is known beyond. Coefficients are
// GMP rationals, so no operation ever rounds.

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace odenorm {

using Rational = mpq_class;

inline constexpr std::size_t kMaxVars = 4;

class VarContext {
 public:
  VarContext(std::vector<std::string> names, std::vector<int> weights);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  int weight(std::size_t i) const { return weights_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<int>& weights() const noexcept { return weights_; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  /// Like index_of but throws ContextError for an unknown name.
  std::size_t require(std::string_view name) const;

  bool operator==(const VarContext&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<int> weights_;
};

using ContextPtr = std::shared_ptr<const VarContext>;

ContextPtr make_context(std::vector<std::string> names, std::vector<int> weights);
bool same_context(const ContextPtr& a, const ContextPtr& b);

namespace contexts {
/// (x, y, u) with weights (1, 2, 1): right-hand sides F(x, y, y').
const ContextPtr& xyu();
/// (x, a, b) with weights (1, 1, 2): manifolds of solutions y = Phi(x, a, b).
const ContextPtr& xab();
/// (x, y) with weights (1, 2): point maps f, g.
const ContextPtr& xy();
/// (a, b) with weights (1, 2): parameter maps lambda, mu.
const ContextPtr& ab();
/// (b) with weight 2: coefficient functions Phi_kl(b).
const ContextPtr& b();
}  // namespace contexts

struct Monomial {
  std::array<std::uint16_t, kMaxVars> exp{};

  Monomial() = default;
  Monomial(std::initializer_list<int> exps);

  int operator[](std::size_t i) const { return exp[i]; }
  auto operator<=>(const Monomial&) const = default;
};

int monomial_weight(const VarContext& ctx, const Monomial& m);

struct Term {
  int weight = 0;
  Monomial mono;
  Rational coeff;
};

class TruncatedSeries {
 public:
  /// The zero series.
  TruncatedSeries(ContextPtr ctx, int trunc);

  static TruncatedSeries constant(ContextPtr ctx, int trunc, const Rational& c);
  static TruncatedSeries variable(ContextPtr ctx, std::string_view name, int trunc);
  static TruncatedSeries monomial(ContextPtr ctx, int trunc, const Monomial& m,
                                  const Rational& c);
  /// Duplicate monomials are summed; zero and over-weight terms are dropped.
  static TruncatedSeries from_terms(ContextPtr ctx, int trunc,
                                    std::vector<std::pair<Monomial, Rational>> terms);

  const ContextPtr& ctx() const noexcept { return ctx_; }
  const VarContext& context() const noexcept { return *ctx_; }
  int trunc() const noexcept { return trunc_; }
  /// Terms in canonical order: by weight, then lexicographically by exponents.
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Rational coeff(const Monomial& m) const;
  Rational constant_term() const;
  /// Lowest weight of a stored term; trunc + 1 for the zero series.
  int valuation() const;
  /// Highest weight of a stored term; -1 for the zero series.
  int max_weight() const;
  /// True iff some stored monomial has a positive exponent of variable i.
  bool depends_on(std::size_t i) const;

  bool operator==(const TruncatedSeries& other) const;

 private:
  friend class SeriesAccess;

  ContextPtr ctx_;
  int trunc_;
  std::vector<Term> terms_;
};

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries subtract(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries negate(const TruncatedSeries& s);
TruncatedSeries scale(const TruncatedSeries& s, const Rational& c);
/// Cauchy product; result trunc is min(a.trunc, b.trunc).
TruncatedSeries multiply(const TruncatedSeries& a, const TruncatedSeries& b);
/// Cauchy product keeping monomials of weight <= trunc. The caller vouches
/// that the product is actually known to that weight.
TruncatedSeries multiply_to(const TruncatedSeries& a, const TruncatedSeries& b, int trunc);
TruncatedSeries power(const TruncatedSeries& s, int n);
/// Drops monomials above `trunc` and lowers the truncation weight.
TruncatedSeries truncate(const TruncatedSeries& s, int trunc);
/// Same terms, declared exact up to `trunc`. Only valid for polynomials
/// whose every monomial is already stored.
TruncatedSeries with_trunc(const TruncatedSeries& s, int trunc);

TruncatedSeries differentiate(const TruncatedSeries& s, std::string_view var);
/// Termwise integral with zero constant of integration.
TruncatedSeries antiderivative(const TruncatedSeries& s, std::string_view var);
TruncatedSeries weighted_component(const TruncatedSeries& s, int m);

enum class SubstitutionMode {
  /// `s` is a truncated series: unknown terms beyond s.trunc bound the result.
  series,
  /// `s` is an exact polynomial; substituted series may carry constant terms.
  polynomial,
};

using Assignment = std::vector<std::pair<std::string, TruncatedSeries>>;

/// Formal composition s(v := assignment[v]). Every variable occurring in s
/// must be assigned; all assigned series share one target context.
TruncatedSeries substitute(const TruncatedSeries& s, const Assignment& assignment,
                           SubstitutionMode mode = SubstitutionMode::series);

/// Re-expresses `s` in `target`, mapping variables by name.
TruncatedSeries embed(const TruncatedSeries& s, const ContextPtr& target, int trunc);

/// Compositional inverse in x: s(t(x'), rest) = x'. Requires s = c*x + higher
/// weight with c a nonzero rational.
TruncatedSeries invert_in_x(const TruncatedSeries& s);
TruncatedSeries invert_in(const TruncatedSeries& s, std::string_view var);

/// Inverts the map vars[i] -> images[i] (other variables are parameters held
/// fixed). Each images[i] must be c_i * vars[i] + terms of higher weight or of
/// equal weight in lower-weight variables.
std::vector<TruncatedSeries> invert_map(const std::vector<TruncatedSeries>& images,
                                        const std::vector<std::string>& vars);

/// 1/s for a series with nonzero constant term.
TruncatedSeries reciprocal(const TruncatedSeries& s);

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator-(const TruncatedSeries& s);
TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator*(const Rational& c, const TruncatedSeries& s);

}  // namespace odenorm
