#include "odenorm/json_io.hpp"

#include "odenorm/solutions.hpp"

namespace odenorm {

namespace {

Json exponents(const VarContext& ctx, const Monomial& m) {
  Json e = Json::array();
  for (std::size_t i = 0; i < ctx.size(); ++i) e.push_back(m[i]);
  return e;
}

std::string rational_text(const Rational& q) { return q.get_str(); }

}  // namespace

std::string monomial_text(const VarContext& ctx, const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += ctx.name(i);
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

Json terms_json(const TruncatedSeries& s) {
  Json terms = Json::array();
  for (const Term& t : s.terms()) {
    terms.push_back({{"exp", exponents(s.context(), t.mono)},
                     {"num", t.coeff.get_num().get_str()},
                     {"den", t.coeff.get_den().get_str()}});
  }
  return terms;
}

Json series_json(const TruncatedSeries& s) {
  return {{"vars", s.context().names()},
          {"weights", s.context().weights()},
          {"trunc", s.trunc()},
          {"terms", terms_json(s)}};
}

Json params_json(const NormalizationParams& p) {
  return {{"s", rational_text(p.s)},
          {"t", rational_text(p.t)},
          {"alpha", rational_text(p.alpha)},
          {"beta", rational_text(p.beta)},
          {"r", rational_text(p.r)}};
}

Json normal_form_json(const OdeNormalForm& nf, int weight) {
  return {{"weight", weight},
          {"params", params_json(nf.manifold.params)},
          {"phi_terms", terms_json(nf.manifold.phiN.phi)},
          {"ode_terms", terms_json(nf.N.F)},
          {"map", {{"f", series_json(nf.map.f)}, {"g", series_json(nf.map.g)}}}};
}

Json special_form_json(const SpecialForm& sf, int digits) {
  OdeNormalForm exact{manifold_to_ode(sf.exact.phiN), {sf.exact.map.f, sf.exact.map.g},
                      sf.exact};
  Json out = normal_form_json(exact, sf.weight);
  out["epsilon"] = sf.epsilon;
  out["precision"] = sf.precision;
  out["s"] = format_float(sf.s, digits);
  out["t"] = format_float(sf.t, digits);
  out["z2_symmetric"] = sf.z2_symmetric;
  Json terms = Json::array();
  for (const auto& ft : sf.coeffs) {
    terms.push_back({{"exp", exponents(*contexts::xab(), ft.mono)},
                     {"val", format_float(ft.value, digits)}});
  }
  out["float_terms"] = std::move(terms);
  return out;
}

Json verdict_json(const Verdict& v) {
  Json out = {{"verdict", to_string(v.kind)}, {"weight", v.weight}, {"reason", v.reason}};
  if (v.witness) {
    const Witness& w = *v.witness;
    Json wj = {{"what", w.what}};
    if (w.mono) wj["exp"] = exponents(*contexts::xab(), *w.mono);
    wj["value1"] = w.value1;
    wj["value2"] = w.value2;
    if (!w.gap.empty()) wj["gap"] = w.gap;
    out["witness"] = std::move(wj);
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

Json chain_json(const ChainPolyline& chain, int digits) {
  Json points = Json::array();
  for (std::size_t i = 0; i < chain.points.size(); ++i) {
    const auto& q = chain.points[i];
    points.push_back({{"b", format_float(chain.params[i], digits)},
                      {"x", format_float(q.x, digits)},
                      {"y", format_float(q.y, digits)},
                      {"u", format_float(q.u, digits)}});
  }
  return {{"alpha", rational_text(chain.alpha)},
          {"beta", rational_text(chain.beta)},
          {"step", format_float(chain.step, digits)},
          {"points", std::move(points)}};
}

}  // namespace odenorm
