#include "odenorm/pseries.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <numeric>

#include "odenorm/error.hpp"

namespace odenorm {

// ---------------------------------------------------------------------------
// VarContext

VarContext::VarContext(std::vector<std::string> names, std::vector<int> weights)
    : names_(std::move(names)), weights_(std::move(weights)) {
  if (names_.size() != weights_.size()) {
    throw ContextError("context: names and weights differ in length");
  }
  if (names_.empty() || names_.size() > kMaxVars) {
    throw ContextError("context: between 1 and " + std::to_string(kMaxVars) +
                       " variables supported");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (weights_[i] <= 0) throw ContextError("context: weights must be positive");
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[i] == names_[j]) throw ContextError("context: duplicate variable " + names_[i]);
    }
  }
}

std::optional<std::size_t> VarContext::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t VarContext::require(std::string_view name) const {
  auto i = index_of(name);
  if (!i) throw ContextError("unknown variable '" + std::string(name) + "'");
  return *i;
}

ContextPtr make_context(std::vector<std::string> names, std::vector<int> weights) {
  return std::make_shared<const VarContext>(std::move(names), std::move(weights));
}

bool same_context(const ContextPtr& a, const ContextPtr& b) {
  return a == b || *a == *b;
}

namespace contexts {
const ContextPtr& xyu() {
  static const ContextPtr c = make_context({"x", "y", "u"}, {1, 2, 1});
  return c;
}
const ContextPtr& xab() {
  static const ContextPtr c = make_context({"x", "a", "b"}, {1, 1, 2});
  return c;
}
const ContextPtr& xy() {
  static const ContextPtr c = make_context({"x", "y"}, {1, 2});
  return c;
}
const ContextPtr& ab() {
  static const ContextPtr c = make_context({"a", "b"}, {1, 2});
  return c;
}
const ContextPtr& b() {
  static const ContextPtr c = make_context({"b"}, {2});
  return c;
}
}  // namespace contexts

// ---------------------------------------------------------------------------
// Monomials

Monomial::Monomial(std::initializer_list<int> exps) {
  if (exps.size() > kMaxVars) throw ContextError("monomial: too many exponents");
  std::size_t i = 0;
  for (int e : exps) {
    if (e < 0 || e > UINT16_MAX) throw DomainError("monomial: exponent out of range");
    exp[i++] = static_cast<std::uint16_t>(e);
  }
}

int monomial_weight(const VarContext& ctx, const Monomial& m) {
  int w = 0;
  for (std::size_t i = 0; i < ctx.size(); ++i) w += m.exp[i] * ctx.weight(i);
  return w;
}

namespace {

bool canonical_less(const Term& a, const Term& b) {
  if (a.weight != b.weight) return a.weight < b.weight;
  return a.mono < b.mono;
}

void require_same(const TruncatedSeries& a, const TruncatedSeries& b, const char* op) {
  if (!same_context(a.ctx(), b.ctx())) {
    throw ContextError(std::string(op) + ": context mismatch");
  }
}

// Collects monomial/coefficient contributions and emits canonical terms.
// Small weight boxes use a dense buffer recycled through a thread-local pool.
class Accumulator {
 public:
  Accumulator(const VarContext& ctx, int trunc) : ctx_(ctx), trunc_(trunc) {
    if (trunc < 0) {
      dense_ = false;
      return;
    }
    std::size_t size = 1;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      std::size_t bound = static_cast<std::size_t>(trunc / ctx.weight(i)) + 1;
      stride_[i] = size;
      size *= bound;
      if (size > kDenseLimit) {
        dense_ = false;
        return;
      }
    }
    dense_ = true;
    buf_ = acquire(size);
  }

  Accumulator(const Accumulator&) = delete;
  Accumulator& operator=(const Accumulator&) = delete;

  ~Accumulator() {
    if (buf_) release(std::move(buf_));
  }

  void add(const Monomial& m, const Rational& c) {
    if (dense_) {
      Rational& slot = slot_for(m);
      slot += c;
    } else {
      sparse_[m] += c;
    }
  }

  void add_product(const Monomial& m, const Rational& a, const Rational& b) {
    mpq_mul(tmp_.get_mpq_t(), a.get_mpq_t(), b.get_mpq_t());
    if (dense_) {
      Rational& slot = slot_for(m);
      mpq_add(slot.get_mpq_t(), slot.get_mpq_t(), tmp_.get_mpq_t());
    } else {
      Rational& slot = sparse_[m];
      mpq_add(slot.get_mpq_t(), slot.get_mpq_t(), tmp_.get_mpq_t());
    }
  }

  std::vector<Term> finish() {
    std::vector<Term> out;
    if (dense_) {
      out.reserve(buf_->touched.size());
      for (std::size_t k = 0; k < buf_->touched.size(); ++k) {
        std::size_t idx = buf_->touched[k];
        Rational& v = buf_->vals[idx];
        if (sgn(v) != 0) {
          const Monomial& m = buf_->monos[k];
          out.push_back(Term{monomial_weight(ctx_, m), m, v});
          v = 0;
        }
        buf_->used[idx] = 0;
      }
      buf_->touched.clear();
      buf_->monos.clear();
    } else {
      for (auto& [m, v] : sparse_) {
        if (sgn(v) == 0) continue;
        int w = monomial_weight(ctx_, m);
        if (w > trunc_) continue;
        out.push_back(Term{w, m, v});
      }
      sparse_.clear();
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
  }

 private:
  static constexpr std::size_t kDenseLimit = 1u << 16;

  struct Buffer {
    std::vector<Rational> vals;
    std::vector<unsigned char> used;
    std::vector<std::size_t> touched;
    std::vector<Monomial> monos;
  };

  static std::vector<std::unique_ptr<Buffer>>& pool() {
    thread_local std::vector<std::unique_ptr<Buffer>> p;
    return p;
  }

  static std::unique_ptr<Buffer> acquire(std::size_t size) {
    auto& p = pool();
    std::unique_ptr<Buffer> b;
    if (!p.empty()) {
      b = std::move(p.back());
      p.pop_back();
    } else {
      b = std::make_unique<Buffer>();
    }
    if (b->vals.size() < size) {
      b->vals.resize(size);
      b->used.resize(size, 0);
    }
    return b;
  }

  static void release(std::unique_ptr<Buffer> b) { pool().push_back(std::move(b)); }

  Rational& slot_for(const Monomial& m) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < ctx_.size(); ++i) idx += m.exp[i] * stride_[i];
    if (!buf_->used[idx]) {
      buf_->used[idx] = 1;
      buf_->touched.push_back(idx);
      buf_->monos.push_back(m);
    }
    return buf_->vals[idx];
  }

  const VarContext& ctx_;
  int trunc_;
  bool dense_ = false;
  std::array<std::size_t, kMaxVars> stride_{};
  std::unique_ptr<Buffer> buf_;
  std::map<Monomial, Rational> sparse_;
  Rational tmp_;
};

Monomial mono_add(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    m.exp[i] = static_cast<std::uint16_t>(a.exp[i] + b.exp[i]);
  }
  return m;
}

}  // namespace

// Grants the free functions below direct access to the term vector.
class SeriesAccess {
 public:
  static TruncatedSeries make(ContextPtr ctx, int trunc, std::vector<Term> terms) {
    TruncatedSeries s(std::move(ctx), trunc);
    s.terms_ = std::move(terms);
    return s;
  }
};

// ---------------------------------------------------------------------------
// TruncatedSeries

TruncatedSeries::TruncatedSeries(ContextPtr ctx, int trunc)
    : ctx_(std::move(ctx)), trunc_(trunc) {
  if (!ctx_) throw ContextError("series: null context");
  if (trunc_ < 0) throw TruncationError("series: negative truncation weight");
}

TruncatedSeries TruncatedSeries::constant(ContextPtr ctx, int trunc, const Rational& c) {
  return monomial(std::move(ctx), trunc, Monomial{}, c);
}

TruncatedSeries TruncatedSeries::variable(ContextPtr ctx, std::string_view name, int trunc) {
  std::size_t i = ctx->require(name);
  Monomial m;
  m.exp[i] = 1;
  return monomial(std::move(ctx), trunc, m, Rational(1));
}

TruncatedSeries TruncatedSeries::monomial(ContextPtr ctx, int trunc, const Monomial& m,
                                          const Rational& c) {
  TruncatedSeries s(std::move(ctx), trunc);
  int w = monomial_weight(*s.ctx_, m);
  if (sgn(c) != 0 && w <= trunc) s.terms_.push_back(Term{w, m, c});
  return s;
}

TruncatedSeries TruncatedSeries::from_terms(ContextPtr ctx, int trunc,
                                            std::vector<std::pair<Monomial, Rational>> terms) {
  TruncatedSeries s(std::move(ctx), trunc);
  Accumulator acc(*s.ctx_, trunc);
  for (auto& [m, c] : terms) {
    for (std::size_t i = s.ctx_->size(); i < kMaxVars; ++i) {
      if (m.exp[i] != 0) throw ContextError("from_terms: exponent for missing variable");
    }
    if (monomial_weight(*s.ctx_, m) <= trunc) acc.add(m, c);
  }
  s.terms_ = acc.finish();
  return s;
}

Rational TruncatedSeries::coeff(const Monomial& m) const {
  Term key{monomial_weight(*ctx_, m), m, Rational()};
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key, canonical_less);
  if (it != terms_.end() && it->mono == m) return it->coeff;
  return Rational(0);
}

Rational TruncatedSeries::constant_term() const {
  if (!terms_.empty() && terms_.front().weight == 0) return terms_.front().coeff;
  return Rational(0);
}

int TruncatedSeries::valuation() const {
  return terms_.empty() ? trunc_ + 1 : terms_.front().weight;
}

int TruncatedSeries::max_weight() const {
  return terms_.empty() ? -1 : terms_.back().weight;
}

bool TruncatedSeries::depends_on(std::size_t i) const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [i](const Term& t) { return t.mono.exp[i] != 0; });
}

bool TruncatedSeries::operator==(const TruncatedSeries& other) const {
  if (!same_context(ctx_, other.ctx_) || trunc_ != other.trunc_) return false;
  if (terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].mono != other.terms_[i].mono || terms_[i].coeff != other.terms_[i].coeff) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Arithmetic

namespace {

TruncatedSeries linear_combination(const TruncatedSeries& a, const Rational& ca,
                                   const TruncatedSeries& b, const Rational& cb,
                                   const char* op) {
  require_same(a, b, op);
  int trunc = std::min(a.trunc(), b.trunc());
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  auto ia = a.terms().begin(), ea = a.terms().end();
  auto ib = b.terms().begin(), eb = b.terms().end();
  auto emit = [&](int w, const Monomial& m, Rational c) {
    if (w <= trunc && sgn(c) != 0) out.push_back(Term{w, m, std::move(c)});
  };
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && canonical_less(*ia, *ib))) {
      emit(ia->weight, ia->mono, ca * ia->coeff);
      ++ia;
    } else if (ia == ea || canonical_less(*ib, *ia)) {
      emit(ib->weight, ib->mono, cb * ib->coeff);
      ++ib;
    } else {
      emit(ia->weight, ia->mono, ca * ia->coeff + cb * ib->coeff);
      ++ia;
      ++ib;
    }
  }
  return SeriesAccess::make(a.ctx(), trunc, std::move(out));
}

}  // namespace

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b) {
  return linear_combination(a, Rational(1), b, Rational(1), "add");
}

TruncatedSeries subtract(const TruncatedSeries& a, const TruncatedSeries& b) {
  return linear_combination(a, Rational(1), b, Rational(-1), "subtract");
}

TruncatedSeries negate(const TruncatedSeries& s) { return scale(s, Rational(-1)); }

TruncatedSeries scale(const TruncatedSeries& s, const Rational& c) {
  if (sgn(c) == 0) return TruncatedSeries(s.ctx(), s.trunc());
  std::vector<Term> out = s.terms();
  for (auto& t : out) t.coeff *= c;
  return SeriesAccess::make(s.ctx(), s.trunc(), std::move(out));
}

TruncatedSeries multiply_to(const TruncatedSeries& a, const TruncatedSeries& b, int trunc) {
  require_same(a, b, "multiply");
  if (trunc < 0) throw TruncationError("multiply: negative truncation weight");
  if (a.is_zero() || b.is_zero()) return TruncatedSeries(a.ctx(), trunc);
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  int wb0 = tb.front().weight;
  Accumulator acc(a.context(), trunc);
  for (const Term& x : ta) {
    if (x.weight + wb0 > trunc) break;
    for (const Term& y : tb) {
      if (x.weight + y.weight > trunc) break;
      acc.add_product(mono_add(x.mono, y.mono), x.coeff, y.coeff);
    }
  }
  return SeriesAccess::make(a.ctx(), trunc, acc.finish());
}

TruncatedSeries multiply(const TruncatedSeries& a, const TruncatedSeries& b) {
  return multiply_to(a, b, std::min(a.trunc(), b.trunc()));
}

TruncatedSeries power(const TruncatedSeries& s, int n) {
  if (n < 0) throw DomainError("power: negative exponent");
  TruncatedSeries result = TruncatedSeries::constant(s.ctx(), s.trunc(), Rational(1));
  TruncatedSeries base = s;
  while (n > 0) {
    if (n & 1) result = multiply(result, base);
    n >>= 1;
    if (n) base = multiply(base, base);
  }
  return result;
}

TruncatedSeries truncate(const TruncatedSeries& s, int trunc) {
  return with_trunc(s, std::min(trunc, s.trunc()));
}

TruncatedSeries with_trunc(const TruncatedSeries& s, int trunc) {
  std::vector<Term> out;
  for (const Term& t : s.terms()) {
    if (t.weight > trunc) break;
    out.push_back(t);
  }
  return SeriesAccess::make(s.ctx(), trunc, std::move(out));
}

TruncatedSeries differentiate(const TruncatedSeries& s, std::string_view var) {
  std::size_t v = s.context().require(var);
  int w = s.context().weight(v);
  int trunc = s.trunc() - w;
  if (trunc < 0) throw TruncationError("differentiate: truncation weight exhausted");
  std::vector<Term> out;
  for (const Term& t : s.terms()) {
    if (t.mono.exp[v] == 0) continue;
    Term d = t;
    d.coeff *= t.mono.exp[v];
    d.mono.exp[v] -= 1;
    d.weight -= w;
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return SeriesAccess::make(s.ctx(), trunc, std::move(out));
}

TruncatedSeries antiderivative(const TruncatedSeries& s, std::string_view var) {
  std::size_t v = s.context().require(var);
  int w = s.context().weight(v);
  std::vector<Term> out;
  for (const Term& t : s.terms()) {
    Term d = t;
    d.coeff /= (t.mono.exp[v] + 1);
    d.mono.exp[v] += 1;
    d.weight += w;
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return SeriesAccess::make(s.ctx(), s.trunc() + w, std::move(out));
}

TruncatedSeries weighted_component(const TruncatedSeries& s, int m) {
  if (m < 0 || m > s.trunc()) {
    throw TruncationError("weighted_component: weight " + std::to_string(m) +
                          " outside [0, " + std::to_string(s.trunc()) + "]");
  }
  std::vector<Term> out;
  for (const Term& t : s.terms()) {
    if (t.weight == m) out.push_back(t);
  }
  return SeriesAccess::make(s.ctx(), s.trunc(), std::move(out));
}

// ---------------------------------------------------------------------------
// Composition

namespace {

struct SubstitutionPlan {
  ContextPtr target;
  int trunc = 0;
  // For each variable of the source context: the assigned series, or null.
  std::array<const TruncatedSeries*, kMaxVars> images{};
};

// ceil(num * k / den) for non-negative operands.
long ceil_ratio(long num, long k, long den) { return (num * k + den - 1) / den; }

SubstitutionPlan plan_substitution(const TruncatedSeries& s, const Assignment& assignment,
                                   SubstitutionMode mode) {
  if (assignment.empty()) throw ContextError("substitute: empty assignment");
  SubstitutionPlan plan;
  plan.target = assignment.front().second.ctx();
  const VarContext& src = s.context();
  for (const auto& [name, image] : assignment) {
    if (!same_context(image.ctx(), plan.target)) {
      throw ContextError("substitute: assigned series do not share a context");
    }
    auto i = src.index_of(name);
    if (!i) continue;
    if (plan.images[*i]) throw ContextError("substitute: variable assigned twice: " + name);
    plan.images[*i] = &image;
  }

  // Every image monomial has weight >= rho * (weight of its source monomial),
  // rho = min_v ord(image_v) / weight_v over the relevant variables.
  const bool series = mode == SubstitutionMode::series;
  long rho_num = -1, rho_den = 1;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const TruncatedSeries* img = plan.images[i];
    if (!img || (!series && !s.depends_on(i))) continue;
    long ord = img->valuation();
    long w = src.weight(i);
    if (rho_num < 0 || ord * rho_den < rho_num * w) {
      rho_num = ord;
      rho_den = w;
    }
  }
  const bool any_relevant = rho_num >= 0;
  if (!any_relevant) rho_num = 0;
  auto lift = [&](long k) { return k <= 0 ? 0L : ceil_ratio(rho_num, k, rho_den); };

  std::array<int, kMaxVars> min_weight;
  min_weight.fill(INT_MAX);
  for (const Term& t : s.terms()) {
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (t.mono.exp[i] != 0) min_weight[i] = std::min(min_weight[i], t.weight);
    }
  }

  // The unknown part of image_v has weight > trunc_v; inside a monomial v*m
  // it is multiplied by the image of m.
  long known = LONG_MAX;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (min_weight[i] == INT_MAX) continue;
    if (!plan.images[i]) {
      throw ContextError("substitute: variable '" + src.name(i) + "' has no assignment");
    }
    known = std::min(known, plan.images[i]->trunc() + lift(min_weight[i] - src.weight(i)));
  }

  if (series) {
    if (!any_relevant) {
      known = std::min<long>(known, s.trunc());
    } else {
      if (rho_num == 0) {
        throw DomainError("substitute: non-nilpotent substitution into a truncated series");
      }
      // Unknown terms of s have weight > s.trunc.
      const long tail = static_cast<long>(s.trunc()) + 1;
      known = std::min(known, lift(tail) - 1);
      for (std::size_t i = 0; i < src.size(); ++i) {
        if (!plan.images[i]) continue;
        known = std::min(known, plan.images[i]->trunc() + lift(tail - src.weight(i)));
      }
    }
  }
  if (known == LONG_MAX) {
    for (const auto& [name, image] : assignment) known = std::min<long>(known, image.trunc());
  }
  if (known < 0) throw TruncationError("substitute: no coefficient survives truncation");
  plan.trunc = static_cast<int>(known);
  return plan;
}

class Substituter {
 public:
  Substituter(const SubstitutionPlan& plan, std::size_t nvars)
      : plan_(plan), nvars_(nvars), powers_(nvars) {}

  // Sum over terms[begin, end) (all sharing exponents of variables < k).
  TruncatedSeries eval(const std::vector<Term>& terms, std::size_t begin, std::size_t end,
                       std::size_t k) {
    if (k == nvars_) {
      Rational c = 0;
      for (std::size_t i = begin; i < end; ++i) c += terms[i].coeff;
      return TruncatedSeries::constant(plan_.target, plan_.trunc, c);
    }
    TruncatedSeries result(plan_.target, plan_.trunc);
    std::size_t i = begin;
    while (i < end) {
      int e = terms[i].mono.exp[k];
      std::size_t j = i;
      while (j < end && terms[j].mono.exp[k] == e) ++j;
      TruncatedSeries inner = eval(terms, i, j, k + 1);
      if (e == 0) {
        result = add(result, inner);
      } else {
        result = add(result, multiply_to(power_of(k, e), inner, plan_.trunc));
      }
      i = j;
    }
    return result;
  }

 private:
  const TruncatedSeries& power_of(std::size_t k, int e) {
    auto& cache = powers_[k];
    if (cache.empty()) cache.push_back(with_trunc(*plan_.images[k], plan_.trunc));
    while (static_cast<int>(cache.size()) < e) {
      cache.push_back(multiply_to(cache.back(), cache.front(), plan_.trunc));
    }
    return cache[e - 1];
  }

  const SubstitutionPlan& plan_;
  std::size_t nvars_;
  std::vector<std::vector<TruncatedSeries>> powers_;
};

}  // namespace

TruncatedSeries substitute(const TruncatedSeries& s, const Assignment& assignment,
                           SubstitutionMode mode) {
  SubstitutionPlan plan = plan_substitution(s, assignment, mode);
  std::vector<Term> terms = s.terms();
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.mono < b.mono; });
  Substituter sub(plan, s.context().size());
  return sub.eval(terms, 0, terms.size(), 0);
}

TruncatedSeries embed(const TruncatedSeries& s, const ContextPtr& target, int trunc) {
  const VarContext& src = s.context();
  std::array<std::size_t, kMaxVars> map{};
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto j = target->index_of(src.name(i));
    if (!j) {
      if (s.depends_on(i)) {
        throw ContextError("embed: variable '" + src.name(i) + "' missing from target");
      }
      map[i] = kMaxVars;
      continue;
    }
    if (target->weight(*j) != src.weight(i)) {
      throw ContextError("embed: weight of '" + src.name(i) + "' differs in target");
    }
    map[i] = *j;
  }
  int out_trunc = std::min(trunc, s.trunc());
  std::vector<Term> out;
  for (const Term& t : s.terms()) {
    if (t.weight > out_trunc) break;
    Term n{t.weight, Monomial{}, t.coeff};
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (map[i] < kMaxVars) n.mono.exp[map[i]] = t.mono.exp[i];
    }
    out.push_back(std::move(n));
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return SeriesAccess::make(target, out_trunc, std::move(out));
}

std::vector<TruncatedSeries> invert_map(const std::vector<TruncatedSeries>& images,
                                        const std::vector<std::string>& vars) {
  if (images.empty() || images.size() != vars.size()) {
    throw ContextError("invert_map: need one image per inverted variable");
  }
  const ContextPtr& ctx = images.front().ctx();
  int max_trunc = 0;
  for (const auto& img : images) {
    if (!same_context(img.ctx(), ctx)) throw ContextError("invert_map: context mismatch");
    max_trunc = std::max(max_trunc, img.trunc());
  }

  const std::size_t n = vars.size();
  std::vector<Rational> lead(n);
  std::vector<TruncatedSeries> rest;
  std::vector<TruncatedSeries> identity;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t v = ctx->require(vars[i]);
    Monomial m;
    m.exp[v] = 1;
    lead[i] = images[i].coeff(m);
    if (sgn(lead[i]) == 0) {
      throw DomainError("invert: vanishing linear coefficient of " + vars[i]);
    }
    TruncatedSeries var = TruncatedSeries::variable(ctx, vars[i], images[i].trunc());
    rest.push_back(subtract(images[i], scale(var, lead[i])));
    identity.push_back(std::move(var));
  }

  // Variables not being inverted are parameters mapped to themselves.
  Assignment assignment;
  for (std::size_t v = 0; v < ctx->size(); ++v) {
    assignment.emplace_back(ctx->name(v),
                            TruncatedSeries::variable(ctx, ctx->name(v), max_trunc));
  }
  std::vector<std::size_t> slot(n);
  for (std::size_t i = 0; i < n; ++i) slot[i] = ctx->require(vars[i]);

  std::vector<TruncatedSeries> current;
  for (std::size_t i = 0; i < n; ++i) {
    current.push_back(scale(identity[i], Rational(1) / lead[i]));
  }
  // One fixed-point step at truncation level L; returns true when stable.
  auto step = [&](int L) {
    for (std::size_t i = 0; i < n; ++i) assignment[slot[i]].second = current[i];
    std::vector<TruncatedSeries> next;
    bool stable = true;
    for (std::size_t i = 0; i < n; ++i) {
      TruncatedSeries r = substitute(truncate(rest[i], L), assignment);
      TruncatedSeries t =
          scale(subtract(truncate(identity[i], L), r), Rational(1) / lead[i]);
      if (!(t == current[i])) stable = false;
      next.push_back(std::move(t));
    }
    current = std::move(next);
    return stable;
  };

  // Each step gains weight, so early steps run on cheap low-weight data.
  for (int L = 1; L < max_trunc; ++L) step(L);
  const int max_iter = 4 * max_trunc + 16;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (step(max_trunc)) return current;
  }
  throw DomainError("invert: fixed-point iteration did not converge");
}

TruncatedSeries invert_in(const TruncatedSeries& s, std::string_view var) {
  return invert_map({s}, {std::string(var)}).front();
}

TruncatedSeries invert_in_x(const TruncatedSeries& s) { return invert_in(s, "x"); }

TruncatedSeries reciprocal(const TruncatedSeries& s) {
  Rational c = s.constant_term();
  if (sgn(c) == 0) throw DomainError("reciprocal: vanishing constant term");
  TruncatedSeries one = TruncatedSeries::constant(s.ctx(), s.trunc(), Rational(1));
  TruncatedSeries r = subtract(scale(s, Rational(1) / c), one);
  TruncatedSeries t = one;
  for (int iter = 0; iter <= s.trunc() + 1; ++iter) {
    TruncatedSeries next = subtract(one, multiply(r, t));
    if (next == t) break;
    t = std::move(next);
  }
  return scale(t, Rational(1) / c);
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) { return add(a, b); }
TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
  return subtract(a, b);
}
TruncatedSeries operator-(const TruncatedSeries& s) { return negate(s); }
TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  return multiply(a, b);
}
TruncatedSeries operator*(const Rational& c, const TruncatedSeries& s) { return scale(s, c); }

}  // namespace odenorm
