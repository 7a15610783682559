#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "odenorm/cli.hpp"

using namespace odenorm;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "odenorm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = main_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (l == line) return true;
  return false;
}

}  // namespace

TEST_CASE("invariants of the flat ODE") {
  auto r = run({"invariants", "--ode", "0"});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(has_line(r.out, "I1 = 0  [mod weight > 4]"));
  CHECK(has_line(r.out, "I2 = 0  [mod weight > 4]"));
  CHECK(has_line(r.out, "class = flat"));
}

TEST_CASE("classification at the origin and at a shifted point") {
  auto r = run({"classify", "--ode", "u^2*(x^2+u^2)*(1+y)"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "class = strongly-nonflat"));
  CHECK(has_line(r.out, "I1(0) = 24"));
  CHECK(has_line(r.out, "I2(0) = 4"));

  // F = u^4 has I1 = 24 at every point.
  auto s = run({"classify", "--ode", "u^4", "--at", "1,2,1/2", "--json"});
  CHECK(s.code == 0);
  auto doc = nlohmann::json::parse(s.out);
  CHECK(doc["command"] == "classify");
  CHECK(doc["I1_at"] == "24");
  CHECK(doc.contains("recentering"));
}

TEST_CASE("normal form of a linearizable ODE is zero") {
  auto r = run({"normal-form", "--ode", "x*y*u^3", "--weight", "10", "--json"});
  CHECK(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["weight"] == 10);
  CHECK(doc["ode_terms"].empty());
  CHECK(doc["params"]["s"] == "1");
  // Phi_N = b + x a.
  CHECK(doc["phi_terms"].size() == 2);
}

TEST_CASE("equivalence of the family members") {
  auto r = run({"equivalent", "--ode1", "u^2*(x^2+u^2)*(1+y)", "--ode2", "u^2*(x^2+u^2)*(1+2*y)",
                "--weight", "9", "--precision", "40"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "verdict = INEQUIVALENT"));
  CHECK(r.out.find("witness = coefficient") != std::string::npos);
}

TEST_CASE("special normal form output") {
  auto r = run({"special-normal-form", "--ode", "u^2*(x^2+u^2)*(1+y)", "--weight", "8",
                "--precision", "20"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "epsilon = 1"));
  CHECK(has_line(r.out, "x^4*a^2: 1.0000000000000000000e+00"));
  CHECK(has_line(r.out, "x^2*a^4: 1.0000000000000000000e+00"));
}

TEST_CASE("solutions and transform") {
  auto r = run({"solutions", "--ode", "u^2", "--weight", "6"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "Phi = b + x*a + (1/2)*x^2*a^2 + (1/3)*x^3*a^3  [mod weight > 6]"));

  // (x, y) / (1 - x) is projective; the flat ODE is preserved to weight 8.
  const char* proj =
      "x + x^2 + x^3 + x^4 + x^5 + x^6 + x^7 + x^8 + x^9 + x^10 ; "
      "y + x*y + x^2*y + x^3*y + x^4*y + x^5*y + x^6*y + x^7*y + x^8*y";
  auto t = run({"transform", "--ode", "0", "--map", proj, "--weight", "8"});
  CHECK(t.code == 0);
  CHECK(has_line(t.out, "F = 0  [mod weight > 8]"));
  // The first two terms alone are not projective.
  auto q = run({"transform", "--ode", "0", "--map", "x + x^2 ; y + x*y", "--weight", "8"});
  CHECK(q.code == 0);
  CHECK(q.out.rfind("F = -2*y + 2*x*u", 0) == 0);
}

TEST_CASE("chain output") {
  auto r = run({"chain", "--ode", "0", "--steps", "2", "--precision", "16"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "b,x,y,u\n"
        "0,0,0,0\n"
        "1.000000000000000e-02,0,1.000000000000000e-02,0\n"
        "2.000000000000000e-02,0,2.000000000000000e-02,0\n");
  auto j = run({"chain", "--ode", "0", "--steps", "3", "--json"});
  CHECK(j.code == 0);
  auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["points"].size() == 4);
  CHECK(doc["alpha"] == "0");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"invariants"}).code == 2);
  CHECK(run({"invariants", "--ode", "x +"}).code == 2);
  CHECK(run({"invariants", "--ode", "z"}).code == 2);
  CHECK(run({"invariants", "--ode", "0", "--weight", "3"}).code == 2);
  CHECK(run({"normal-form", "--ode", "0", "--params", "1,1,0"}).code == 2);
  CHECK(run({"normal-form", "--ode", "0", "--params", "0,1,0,0,0"}).code == 2);
  CHECK(run({"classify", "--ode", "0", "--at", "1,x,0"}).code == 2);
  CHECK(run({"special-normal-form", "--ode", "u^4+x^2*u^2", "--precision", "12"}).code == 2);
  CHECK(run({"chain", "--ode", "0", "--step", "-1/10"}).code == 2);
  auto r = run({"invariants", "--ode", "x +"});
  CHECK(r.out.empty());
  CHECK(r.err.rfind("odenorm: ", 0) == 0);
  CHECK(r.err.find('\n') == r.err.size() - 1);
}

TEST_CASE("domain errors exit with 3") {
  auto r = run({"special-normal-form", "--ode", "x^2*u^2", "--weight", "10"});
  CHECK(r.code == 3);
  CHECK(r.out.empty());
  CHECK(r.err.find("semi-flat") != std::string::npos);
  CHECK(run({"transform", "--ode", "0", "--map", "y ; x"}).code == 3);
  CHECK(run({"special-normal-form", "--ode", "u^4+x^2*u^2", "--weight", "6"}).code == 3);
}

TEST_CASE("identical invocations give identical output") {
  std::vector<std::string> args{"normal-form", "--ode", "x^2*u^2 + u^4 + x*y*u^3",
                                "--params",    "2,-1,1/3,1/4,1/5", "--json"};
  auto a = run(args), b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("help") {
  auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("special-normal-form") != std::string::npos);
}
