#include "odenorm/cli.hpp"

#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "odenorm/chains.hpp"
#include "odenorm/error.hpp"
#include "odenorm/expr.hpp"
#include "odenorm/json_io.hpp"
#include "odenorm/normalform.hpp"
#include "odenorm/solutions.hpp"

namespace odenorm {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string ode, ode1, ode2, map, at;
  std::string params = "1,1,0,0,0";
  std::string dir = "0,0";
  std::string step = "1/100";
  int weight = 8;
  int precision = 40;
  int steps = 100;
  bool json = false;
};

/// "3", "-2/7" or "0.125".
Rational parse_number(std::string text, const std::string& what) {
  auto bad = [&]() { return UsageError("bad rational '" + text + "' in " + what); };
  if (text.empty()) throw bad();
  std::string digits = text;
  bool negative = false;
  if (digits[0] == '-' || digits[0] == '+') {
    negative = digits[0] == '-';
    digits.erase(0, 1);
  }
  Rational q;
  auto dot = digits.find('.');
  auto slash = digits.find('/');
  auto all_digits = [](const std::string& s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
  };
  if (dot != std::string::npos) {
    std::string whole = digits.substr(0, dot), frac = digits.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || !all_digits(frac)) throw bad();
    mpz_class num(whole + frac), den(1);
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    q = Rational(num, den);
  } else if (slash != std::string::npos) {
    std::string num = digits.substr(0, slash), den = digits.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den) || mpz_class(den) == 0) throw bad();
    q = Rational(mpz_class(num), mpz_class(den));
  } else {
    if (!all_digits(digits)) throw bad();
    q = Rational(mpz_class(digits));
  }
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::vector<Rational> parse_list(const std::string& text, std::size_t n, const std::string& what) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    out.push_back(parse_number(b == std::string::npos ? "" : item.substr(b, e - b + 1), what));
  }
  if (out.size() != n)
    throw UsageError(what + " expects " + std::to_string(n) + " comma-separated rationals");
  return out;
}

JetRational base_point(const Config& c) {
  if (c.at.empty()) return {0, 0, 0};
  auto v = parse_list(c.at, 3, "--at");
  return {v[0], v[1], v[2]};
}

struct Loaded {
  OdeJet jet;
  std::optional<PointMap> recentering;
};

/// The ODE at the base point, truncated at weight W. The shift is applied
/// when --at is given or when `always_recenter` and F(0, 0, 0) != 0.
Loaded load_ode(const std::string& text, const Config& c, bool always_recenter) {
  OdeJet jet = make_jet(parse_polynomial(text, contexts::xyu()), true);
  Loaded out{jet, std::nullopt};
  if (!c.at.empty() || (always_recenter && sgn(jet.F.constant_term()) != 0)) {
    auto rec = recenter(jet, base_point(c));
    out.jet = rec.ode;
    out.recentering = rec.map;
  }
  out.jet = lift(out.jet, c.weight);
  if (out.jet.F.trunc() > c.weight)
    out.jet = OdeJet{truncate(out.jet.F, c.weight), out.jet.base, false};
  return out;
}

Json with_command(const std::string& name, const Json& body) {
  Json doc = {{"command", name}};
  for (const auto& [key, value] : body.items()) doc[key] = value;
  return doc;
}

void add_recentering(Json& doc, const Loaded& l) {
  if (l.recentering)
    doc["recentering"] = {{"f", series_json(l.recentering->f)},
                          {"g", series_json(l.recentering->g)}};
}

void print_recentering(std::ostream& out, const Loaded& l) {
  if (!l.recentering) return;
  out << "recentering f = " << format_series(l.recentering->f) << '\n';
  out << "recentering g = " << format_series(l.recentering->g) << '\n';
}

std::string trunc_note(const TruncatedSeries& s) {
  return "  [mod weight > " + std::to_string(s.trunc()) + "]";
}

NormalizationParams parse_params(const Config& c) {
  auto v = parse_list(c.params, 5, "--params");
  if (sgn(v[0]) == 0 || sgn(v[1]) == 0) throw UsageError("--params needs nonzero s and t");
  return {v[0], v[1], v[2], v[3], v[4]};
}

void require_special_precision(const Config& c) {
  if (c.precision < 16) throw UsageError("--precision must be >= 16 for special forms");
}

void emit(std::ostream& out, const std::string& name, const Json& body) {
  out << with_command(name, body).dump(2) << '\n';
}

int run_invariants(const Config& c, std::ostream& out) {
  auto l = load_ode(c.ode, c, false);
  auto inv = tresse_invariants(l.jet);
  auto cls = classify_point(l.jet);
  if (c.json) {
    Json doc = {{"I1", series_json(inv.I1)},
                {"I2", series_json(inv.I2)},
                {"class", to_string(cls.kind)}};
    add_recentering(doc, l);
    emit(out, "invariants", doc);
    return kExitOk;
  }
  print_recentering(out, l);
  out << "I1 = " << format_series(inv.I1) << trunc_note(inv.I1) << '\n';
  out << "I2 = " << format_series(inv.I2) << trunc_note(inv.I2) << '\n';
  out << "class = " << to_string(cls.kind) << '\n';
  return kExitOk;
}

int run_classify(const Config& c, std::ostream& out) {
  auto l = load_ode(c.ode, c, false);
  auto cls = classify_point(l.jet);
  if (c.json) {
    Json doc = {{"class", to_string(cls.kind)},
                {"I1_at", cls.I1_at.get_str()},
                {"I2_at", cls.I2_at.get_str()}};
    add_recentering(doc, l);
    emit(out, "classify", doc);
    return kExitOk;
  }
  print_recentering(out, l);
  out << "class = " << to_string(cls.kind) << '\n';
  out << "I1(0) = " << format_rational(cls.I1_at) << '\n';
  out << "I2(0) = " << format_rational(cls.I2_at) << '\n';
  return kExitOk;
}

int run_solutions(const Config& c, std::ostream& out) {
  auto l = load_ode(c.ode, c, false);
  auto M = integrate_to_manifold(l.jet, c.weight);
  if (c.json) {
    Json doc = {{"weight", c.weight}, {"phi", series_json(M.phi)}};
    add_recentering(doc, l);
    emit(out, "solutions", doc);
    return kExitOk;
  }
  print_recentering(out, l);
  out << "Phi = " << format_series(M.phi) << trunc_note(M.phi) << '\n';
  return kExitOk;
}

int run_normal_form(const Config& c, std::ostream& out) {
  auto params = parse_params(c);
  auto l = load_ode(c.ode, c, true);
  auto nf = normal_form_ode(l.jet, c.weight, params);
  if (c.json) {
    Json doc = normal_form_json(nf, c.weight);
    add_recentering(doc, l);
    emit(out, "normal-form", doc);
    return kExitOk;
  }
  print_recentering(out, l);
  const auto& p = nf.manifold.params;
  out << "weight = " << c.weight << '\n';
  out << "params = " << format_rational(p.s) << ',' << format_rational(p.t) << ','
      << format_rational(p.alpha) << ',' << format_rational(p.beta) << ','
      << format_rational(p.r) << '\n';
  out << "N = " << format_series(nf.N.F) << trunc_note(nf.N.F) << '\n';
  out << "Phi_N = " << format_series(nf.manifold.phiN.phi) << trunc_note(nf.manifold.phiN.phi)
      << '\n';
  out << "f = " << format_series(nf.map.f) << '\n';
  out << "g = " << format_series(nf.map.g) << '\n';
  return kExitOk;
}

int run_special(const Config& c, std::ostream& out) {
  require_special_precision(c);
  auto l = load_ode(c.ode, c, true);
  auto sf = special_normalize(l.jet, c.weight, c.precision);
  PrecisionScope scope(c.precision + 10);
  if (c.json) {
    Json doc = special_form_json(sf, c.precision);
    add_recentering(doc, l);
    emit(out, "special-normal-form", doc);
    return kExitOk;
  }
  print_recentering(out, l);
  const auto& p = sf.exact.params;
  out << "weight = " << sf.weight << '\n';
  out << "epsilon = " << sf.epsilon << '\n';
  out << "precision = " << sf.precision << '\n';
  out << "alpha = " << format_rational(p.alpha) << '\n';
  out << "beta = " << format_rational(p.beta) << '\n';
  out << "r = " << format_rational(p.r) << '\n';
  out << "s = " << format_float(sf.s, c.precision) << '\n';
  out << "t = " << format_float(sf.t, c.precision) << '\n';
  out << "z2_symmetric = " << (sf.z2_symmetric ? "true" : "false") << '\n';
  for (const auto& ft : sf.coeffs)
    out << monomial_text(*contexts::xab(), ft.mono) << ": " << format_float(ft.value, c.precision)
        << '\n';
  return kExitOk;
}

int run_equivalent(const Config& c, std::ostream& out) {
  require_special_precision(c);
  auto l1 = load_ode(c.ode1, c, true), l2 = load_ode(c.ode2, c, true);
  auto v = decide_equivalence(l1.jet, l2.jet, c.weight, c.precision);
  if (c.json) {
    emit(out, "equivalent", verdict_json(v));
    return kExitOk;
  }
  out << "verdict = " << to_string(v.kind) << '\n';
  out << "weight = " << v.weight << '\n';
  out << "reason = " << v.reason << '\n';
  if (v.witness) {
    const auto& w = *v.witness;
    out << "witness = " << w.what;
    if (w.mono) out << ' ' << monomial_text(*contexts::xab(), *w.mono);
    out << ": " << w.value1 << " vs " << w.value2;
    if (!w.gap.empty()) out << " (gap " << w.gap << ')';
    out << '\n';
  }
  return kExitOk;
}

int run_transform(const Config& c, std::ostream& out) {
  auto l = load_ode(c.ode, c, false);
  auto [f, g] = parse_map(c.map, c.weight + 2);
  auto t = transform_ode(l.jet, {f, g}, c.weight);
  if (c.json) {
    Json doc = {{"weight", c.weight}, {"ode", series_json(t.F)}};
    add_recentering(doc, l);
    emit(out, "transform", doc);
    return kExitOk;
  }
  print_recentering(out, l);
  out << "F = " << format_series(t.F) << trunc_note(t.F) << '\n';
  return kExitOk;
}

int run_chain(const Config& c, std::ostream& out) {
  auto d = parse_list(c.dir, 2, "--dir");
  Rational h = parse_number(c.step, "--step");
  if (sgn(h) <= 0) throw UsageError("--step must be positive");
  if (c.steps < 0) throw UsageError("--steps must be >= 0");
  if (c.precision < 10) throw UsageError("--precision must be >= 10 for chains");
  OdeJet ode = make_jet(parse_polynomial(c.ode, contexts::xyu()), true);
  auto chain = trace_chain(ode, base_point(c), d[0], d[1], h, c.steps, c.precision);
  PrecisionScope scope(c.precision);
  if (c.json) {
    emit(out, "chain", chain_json(chain, c.precision));
    return kExitOk;
  }
  out << chain_csv(chain, c.precision);
  return kExitOk;
}

}  // namespace

int main_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Normal forms, invariants and chains of y'' = F(x, y, y')", "odenorm"};
  app.require_subcommand(1);

  auto add_ode = [&](CLI::App* sub) {
    sub->add_option("--ode", c.ode, "F(x, y, u) with u = y'")->required();
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--at", c.at, "base point x,y,u (rationals)");
    sub->add_option("--weight", c.weight, "truncation weight W");
    sub->add_flag("--json", c.json, "emit one JSON document");
  };
  auto add_precision = [&](CLI::App* sub) {
    sub->add_option("--precision", c.precision, "decimal digits");
  };

  auto* invariants = app.add_subcommand("invariants", "Tresse invariants and point class");
  add_ode(invariants);
  add_common(invariants);
  auto* classify = app.add_subcommand("classify", "flat / semi-flat / strongly-nonflat");
  add_ode(classify);
  add_common(classify);
  auto* solutions = app.add_subcommand("solutions", "manifold of solutions y = Phi(x, a, b)");
  add_ode(solutions);
  add_common(solutions);
  auto* normal = app.add_subcommand("normal-form", "normal form for given parameters");
  add_ode(normal);
  add_common(normal);
  normal->add_option("--params", c.params, "s,t,alpha,beta,r");
  auto* special = app.add_subcommand("special-normal-form", "special normal form");
  add_ode(special);
  add_common(special);
  add_precision(special);
  auto* equivalent = app.add_subcommand("equivalent", "decide point equivalence at the origin");
  equivalent->add_option("--ode1", c.ode1, "first F")->required();
  equivalent->add_option("--ode2", c.ode2, "second F")->required();
  add_common(equivalent);
  add_precision(equivalent);
  auto* transform = app.add_subcommand("transform", "image of an ODE under a point map");
  add_ode(transform);
  add_common(transform);
  transform->add_option("--map", c.map, "\"f ; g\" in x, y")->required();
  auto* chain = app.add_subcommand("chain", "trace a chain with RK4");
  add_ode(chain);
  chain->add_option("--at", c.at, "start point x,y,u (rationals)");
  chain->add_option("--dir", c.dir, "direction parameters alpha,beta");
  chain->add_option("--step", c.step, "RK4 step in the parameter");
  chain->add_option("--steps", c.steps, "number of steps");
  chain->add_flag("--json", c.json, "emit one JSON document");
  add_precision(chain);

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "odenorm: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (c.weight < 4) throw UsageError("--weight must be >= 4");
    if (invariants->parsed()) return run_invariants(c, out);
    if (classify->parsed()) return run_classify(c, out);
    if (solutions->parsed()) return run_solutions(c, out);
    if (normal->parsed()) return run_normal_form(c, out);
    if (special->parsed()) return run_special(c, out);
    if (equivalent->parsed()) return run_equivalent(c, out);
    if (transform->parsed()) return run_transform(c, out);
    if (chain->parsed()) return run_chain(c, out);
  } catch (const UsageError& e) {
    err << "odenorm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "odenorm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContextError& e) {
    err << "odenorm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "odenorm: " << e.what() << '\n';
    return kExitDomain;
  }
  err << "odenorm: no subcommand\n";
  return kExitUsage;
}

}  // namespace odenorm
