#include "odenorm/expr.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <vector>

#include "odenorm/error.hpp"

namespace odenorm {

namespace {

struct Node {
  enum class Kind { literal, variable, negate, add, subtract, multiply, power };
  Node(Kind k, std::size_t at) : kind(k), offset(at) {}
  Kind kind;
  std::size_t offset = 0;
  Rational value;
  std::size_t var = 0;
  int exponent = 0;
  std::unique_ptr<Node> lhs, rhs;
};

using NodePtr = std::unique_ptr<Node>;

class Parser {
 public:
  Parser(std::string_view text, const VarContext& ctx) : text_(text), ctx_(ctx) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(Node::Kind kind, std::size_t at, NodePtr l, NodePtr r) {
    auto n = std::make_unique<Node>(kind, at);
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      skip_ws();
      std::size_t at = pos_;
      if (accept('+')) {
        n = binary(Node::Kind::add, at, std::move(n), term());
      } else if (accept('-')) {
        n = binary(Node::Kind::subtract, at, std::move(n), term());
      } else {
        return n;
      }
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      skip_ws();
      std::size_t at = pos_;
      if (!accept('*')) return n;
      n = binary(Node::Kind::multiply, at, std::move(n), unary());
    }
  }

  NodePtr unary() {
    skip_ws();
    std::size_t at = pos_;
    if (accept('-')) {
      auto n = std::make_unique<Node>(Node::Kind::negate, at);
      n->lhs = unary();
      return n;
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    skip_ws();
    std::size_t at = pos_;
    if (!accept('^')) return base;
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail("expected non-negative integer exponent");
    }
    std::string digits = read_digits();
    if (digits.size() > 6) throw ParseError("exponent overflow", at);
    auto n = std::make_unique<Node>(Node::Kind::power, at);
    n->exponent = std::stoi(digits);
    n->lhs = std::move(base);
    return n;
  }

  std::string read_digits() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  NodePtr atom() {
    skip_ws();
    std::size_t at = pos_;
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      auto n = std::make_unique<Node>(Node::Kind::literal, at);
      mpz_class num(read_digits());
      mpz_class den(1);
      if (pos_ < text_.size() && text_[pos_] == '/') {
        ++pos_;
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          fail("expected denominator");
        }
        std::size_t den_at = pos_;
        den = mpz_class(read_digits());
        if (den == 0) throw ParseError("zero denominator", den_at);
      }
      if (pos_ < text_.size() && text_[pos_] == '.') fail("decimal literals are not exact");
      n->value = Rational(num, den);
      n->value.canonicalize();
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
              text_[pos_] == '\'')) {
        ++pos_;
      }
      std::string name(text_.substr(at, pos_ - at));
      auto idx = ctx_.index_of(name);
      if (!idx) throw ParseError("unknown identifier '" + name + "'", at);
      auto n = std::make_unique<Node>(Node::Kind::variable, at);
      n->var = *idx;
      return n;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const VarContext& ctx_;
  std::size_t pos_ = 0;
};

long weight_bound(const Node& n, const VarContext& ctx) {
  long b = 0;
  switch (n.kind) {
    case Node::Kind::literal:
      return 0;
    case Node::Kind::variable:
      return ctx.weight(n.var);
    case Node::Kind::negate:
      return weight_bound(*n.lhs, ctx);
    case Node::Kind::add:
    case Node::Kind::subtract:
      b = std::max(weight_bound(*n.lhs, ctx), weight_bound(*n.rhs, ctx));
      break;
    case Node::Kind::multiply:
      b = weight_bound(*n.lhs, ctx) + weight_bound(*n.rhs, ctx);
      break;
    case Node::Kind::power:
      b = weight_bound(*n.lhs, ctx) * n.exponent;
      break;
  }
  if (b > kMaxParsedWeight) throw ParseError("exponent overflow", n.offset);
  return b;
}

TruncatedSeries evaluate(const Node& n, const ContextPtr& ctx, int trunc) {
  switch (n.kind) {
    case Node::Kind::literal:
      return TruncatedSeries::constant(ctx, trunc, n.value);
    case Node::Kind::variable:
      return TruncatedSeries::variable(ctx, ctx->name(n.var), trunc);
    case Node::Kind::negate:
      return negate(evaluate(*n.lhs, ctx, trunc));
    case Node::Kind::add:
      return add(evaluate(*n.lhs, ctx, trunc), evaluate(*n.rhs, ctx, trunc));
    case Node::Kind::subtract:
      return subtract(evaluate(*n.lhs, ctx, trunc), evaluate(*n.rhs, ctx, trunc));
    case Node::Kind::multiply:
      return multiply(evaluate(*n.lhs, ctx, trunc), evaluate(*n.rhs, ctx, trunc));
    case Node::Kind::power:
      return power(evaluate(*n.lhs, ctx, trunc), n.exponent);
  }
  throw Error("unreachable");
}

std::size_t find_separator(std::string_view text) {
  std::size_t sep = text.find(';');
  if (sep == std::string_view::npos) throw ParseError("missing ';' between f and g", text.size());
  if (text.find(';', sep + 1) != std::string_view::npos) {
    throw ParseError("more than one ';'", text.find(';', sep + 1));
  }
  return sep;
}

}  // namespace

TruncatedSeries parse_polynomial(std::string_view text, const ContextPtr& ctx) {
  Parser parser(text, *ctx);
  NodePtr root = parser.parse();
  int bound = static_cast<int>(weight_bound(*root, *ctx));
  return evaluate(*root, ctx, bound);
}

TruncatedSeries parse_ode(std::string_view text, int weight) {
  return with_trunc(parse_polynomial(text, contexts::xyu()), weight);
}

std::pair<TruncatedSeries, TruncatedSeries> parse_map_polynomial(std::string_view text) {
  std::size_t sep = find_separator(text);
  const ContextPtr& xy = contexts::xy();
  TruncatedSeries f = parse_polynomial(text.substr(0, sep), xy);
  TruncatedSeries g = [&] {
    try {
      return parse_polynomial(text.substr(sep + 1), xy);
    } catch (const ParseError& e) {
      // Re-anchor the offset to the full input.
      std::string what = e.what();
      what = what.substr(0, what.rfind(" at offset "));
      throw ParseError(what, e.offset() + sep + 1);
    }
  }();
  return {std::move(f), std::move(g)};
}

std::pair<TruncatedSeries, TruncatedSeries> parse_map(std::string_view text, int weight) {
  auto [f, g] = parse_map_polynomial(text);
  return {with_trunc(f, weight), with_trunc(g, weight)};
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string format_series(const TruncatedSeries& s, FormatOptions options) {
  if (s.is_zero()) return "0";
  const VarContext& ctx = s.context();
  std::string out;
  bool first = true;
  for (const Term& t : s.terms()) {
    Rational mag = abs(t.coeff);
    bool negative = sgn(t.coeff) < 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;

    std::vector<std::string> factors;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      int e = t.mono.exp[i];
      if (e == 0) continue;
      std::string name = ctx.name(i);
      if (options.jet_alias && name == "u") name = "y'";
      factors.push_back(e == 1 ? name : name + "^" + std::to_string(e));
    }
    if (factors.empty()) {
      out += format_rational(mag);
      continue;
    }
    if (mag != 1) {
      factors.insert(factors.begin(), mag.get_den() == 1 ? format_rational(mag)
                                                         : "(" + format_rational(mag) + ")");
    }
    for (std::size_t k = 0; k < factors.size(); ++k) {
      if (k) out += "*";
      out += factors[k];
    }
  }
  return out;
}

}  // namespace odenorm
