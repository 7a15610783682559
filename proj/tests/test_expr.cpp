#include "doctest.h"
#include "odenorm/error.hpp"
#include "odenorm/expr.hpp"
#include "support.hpp"

using namespace odenorm;
using namespace odenorm::testing;

TEST_CASE("parse_ode examples") {
  CHECK(parse_ode("0", 8).is_zero());
  CHECK(parse_ode("0", 8).trunc() == 8);

  auto f = parse_ode("x*y*u^3", 8);
  CHECK(f.size() == 1);
  CHECK(f.coeff({1, 1, 3}) == 1);

  auto g = parse_ode("u^2*(x^2+u^2)*(1+y)", 8);
  CHECK(g.size() == 4);
  CHECK(g.coeff({2, 0, 2}) == 1);
  CHECK(g.coeff({0, 0, 4}) == 1);
  CHECK(g.coeff({2, 1, 2}) == 1);
  CHECK(g.coeff({0, 1, 4}) == 1);
}

TEST_CASE("parse truncates high-weight terms") {
  auto f = parse_ode("u^2 + x^7", 6);
  CHECK(f.size() == 1);
  CHECK(f.trunc() == 6);
}

TEST_CASE("precedence and whitespace") {
  CHECK(parse_ode("-x^2", 4) == parse_ode("-(x^2)", 4));
  CHECK(parse_ode("-x^2", 4).coeff({2, 0, 0}) == -1);
  CHECK(parse_ode("2*x+3*u", 4) == parse_ode(" 2 * x + 3*u ", 4));
  CHECK(parse_ode("x-y-u", 4).coeff({0, 0, 1}) == -1);
  CHECK(parse_ode("1/2*x*-u", 4).coeff({1, 0, 1}) == Rational(-1, 2));
  CHECK(parse_ode("(x+u)^2", 4) == parse_ode("x^2 + 2*x*u + u^2", 4));
  CHECK(parse_ode("x^0", 4) == parse_ode("1", 4));
  CHECK(parse_ode("4/6", 4).constant_term() == Rational(2, 3));
}

TEST_CASE("parse errors carry offsets") {
  auto offset_of = [](const char* text) -> std::size_t {
    try {
      parse_ode(text, 6);
    } catch (const ParseError& e) {
      return e.offset();
    }
    return 9999;
  };
  CHECK(offset_of("x + q") == 4);
  CHECK(offset_of("x +") == 3);
  CHECK(offset_of("(x") == 2);
  CHECK(offset_of("x^-1") == 2);
  CHECK(offset_of("x^2^3") == 3);
  CHECK(offset_of("1/0") == 2);
  CHECK(offset_of("1.5") == 1);
  CHECK(offset_of("y'") == 0);
  CHECK(offset_of("x ) ") == 2);
  CHECK_THROWS_AS(parse_ode("x^100000", 6), ParseError);
  CHECK_THROWS_AS(parse_ode("(y^40)^80", 6), ParseError);
  CHECK_THROWS_AS(parse_ode("x^9999999", 6), ParseError);
}

TEST_CASE("parse_map") {
  auto [f, g] = parse_map("y ; x", 6);
  CHECK(f == var(contexts::xy(), "y", 6));
  CHECK(g == var(contexts::xy(), "x", 6));

  auto [f2, g2] = parse_map("x;y", 6);
  CHECK(f2 == var(contexts::xy(), "x", 6));
  CHECK(g2 == var(contexts::xy(), "y", 6));

  auto [f3, g3] = parse_map("x + 2*y ; 3*y", 6);
  CHECK(f3.coeff({0, 1}) == 2);
  CHECK(g3.coeff({0, 1}) == 3);

  CHECK_THROWS_AS(parse_map("x y", 6), ParseError);
  CHECK_THROWS_AS(parse_map("x;y;x", 6), ParseError);
  try {
    parse_map("x ; u", 6);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("format_series") {
  const auto& XAB = contexts::xab();
  CHECK(format_series(TruncatedSeries(XAB, 4)) == "0");
  auto x = var(XAB, "x", 9), a = var(XAB, "a", 9), b = var(XAB, "b", 9);
  CHECK(format_series(b + a * x) == "b + x*a");
  CHECK(format_series(Rational(1, 12) * power(x, 4) * a * a) == "(1/12)*x^4*a^2");
  CHECK(format_series(cst(XAB, 3, Rational(-3, 2)) + Rational(-2) * x) == "-3/2 - 2*x");
  auto f = parse_ode("u^2 - x*u", 4);
  CHECK(format_series(f, {.jet_alias = true}) == "y'^2 - x*y'");
}

TEST_CASE("property: parse inverts format") {
  std::mt19937 rng(21);
  const auto& XYU = contexts::xyu();
  for (int n = 0; n < 100; ++n) {
    auto s = random_series(rng, XYU, 8, 0, 8, 8);
    auto text = format_series(s);
    CHECK_MESSAGE(parse_ode(text, 8) == s, text);
  }
  const auto& XAB = contexts::xab();
  for (int n = 0; n < 50; ++n) {
    auto s = random_series(rng, XAB, 8, 0, 8, 8);
    CHECK(with_trunc(parse_polynomial(format_series(s), XAB), 8) == s);
  }
}
