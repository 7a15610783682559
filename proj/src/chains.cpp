#include "odenorm/chains.hpp"

#include <sstream>

#include "odenorm/error.hpp"

namespace odenorm {

namespace {

constexpr int kManifoldWeight = 6;
constexpr int kNormalWeight = 5;

// One variable of weight 1 for curves through the origin.
const ContextPtr& curve_ctx() {
  static const ContextPtr ctx = make_context({"t"}, {1});
  return ctx;
}

struct Local {
  JetRational p;
  Rational k;   // F(p)
  Rational cu;  // coefficient of u in the recentered F
  SolutionManifold M;
};

Local localize(const OdeJet& ode, const JetRational& p) {
  auto rec = recenter(ode, p);
  Rational k = -2 * rec.map.g.coeff({2, 0});
  OdeJet low = make_jet(truncate(lift(rec.ode, kManifoldWeight - 2).F, kManifoldWeight - 2));
  Rational cu = low.F.coeff({0, 0, 1});
  return {p, k, cu, integrate_to_manifold(low, kManifoldWeight)};
}

ChainJet jet_at(const Local& loc, const NormalizationParams& params) {
  const auto H = normalize_manifold(loc.M, kNormalWeight, params).map;
  const Rational fx = H.f.coeff({1, 0}), la = H.lam.coeff({1, 0});
  if (sgn(fx) == 0 || sgn(la) == 0) throw DomainError("degenerate prolongation");

  const auto& T = curve_ctx();
  const int N = 2;
  auto t = TruncatedSeries::variable(T, "t", N);
  std::array<Rational, N + 1> xs{}, as{};
  auto series = [&](const std::array<Rational, N + 1>& c) {
    std::vector<std::pair<Monomial, Rational>> terms;
    for (int n = 1; n <= N; ++n) terms.push_back({Monomial{n}, c[n]});
    return TruncatedSeries::from_terms(T, N, std::move(terms));
  };
  const auto poly = SubstitutionMode::polynomial;
  auto phi_x = differentiate(loc.M.phi, "x");
  TruncatedSeries X = series(xs), A = series(as), Y = X;
  auto on_curve = [&](const TruncatedSeries& s) {
    return substitute(s, {{"x", X}, {"a", A}, {"b", t}}, poly);
  };
  // f(x, Phi(x, a, b)) = 0 and lam(a, b) = 0 along the curve. The Jacobian
  // in (x, a) at the origin is diag(f_x, lam_a), so solve order by order.
  for (int n = 1; n <= N; ++n) {
    Y = on_curve(loc.M.phi);
    auto G1 = substitute(H.f, {{"x", X}, {"y", Y}}, poly);
    auto G2 = substitute(H.lam, {{"a", A}, {"b", t}}, poly);
    xs[n] -= G1.coeff(Monomial{n}) / fx;
    as[n] -= G2.coeff(Monomial{n}) / la;
    X = series(xs);
    A = series(as);
  }
  Y = on_curve(loc.M.phi);
  auto U = on_curve(phi_x);

  // Back to the original 1-jet coordinates.
  const auto& p = loc.p;
  auto one = TruncatedSeries::constant(T, N, 1);
  auto xo = X + p[0] * one;
  auto yo = Y + p[1] * one + p[2] * X + (loc.k / 2) * X * X;
  auto uo = U + p[2] * one + loc.k * X;

  ChainJet out;
  out.dx = xs[1];
  out.da = as[1];
  JetRational c2;
  const std::array<const TruncatedSeries*, 3> comps{&xo, &yo, &uo};
  for (int i = 0; i < 3; ++i) {
    out.velocity[i] = comps[i]->coeff(Monomial{1});
    c2[i] = comps[i]->coeff(Monomial{2});
  }
  // Reparameterize so that dy - u dx stays 1 to second order.
  const auto& v = out.velocity;
  Rational drift = 2 * c2[1] - v[2] * v[0] - p[2] * 2 * c2[0];
  for (int i = 0; i < 3; ++i) out.acceleration[i] = 2 * c2[i] - drift * v[i];
  return out;
}

std::pair<Rational, Rational> params_for(const Local& loc, const JetRational& v) {
  const auto& p = loc.p;
  Rational omega = v[1] - p[2] * v[0];
  if (sgn(omega) == 0) throw DomainError("direction is tangent to the contact plane");
  Rational vx = v[0] / omega, va = (v[2] - loc.k * v[0]) / omega;
  // The weight-3 correction adds -F_u(0)/2 b to lam.
  return {-vx, (loc.cu / 2 - va) / 2};
}

}  // namespace

ChainJet chain_jet(const OdeJet& ode, const JetRational& p, const NormalizationParams& params) {
  return jet_at(localize(ode, p), params);
}

std::pair<Rational, Rational> chain_direction(const OdeJet& ode, const JetRational& p,
                                              const Rational& alpha, const Rational& beta) {
  auto j = chain_jet(ode, p, {1, 1, alpha, beta, 0});
  return {j.dx, j.da};
}

std::pair<Rational, Rational> direction_params(const OdeJet& ode, const JetRational& p,
                                               const JetRational& v) {
  return params_for(localize(ode, p), v);
}

ChainPolyline trace_chain(const OdeJet& ode, const JetRational& p, const Rational& alpha,
                          const Rational& beta, const Rational& step, int steps, int precision) {
  if (steps < 0) throw DomainError("negative step count");
  if (precision < 10) throw DomainError("chain tracing needs precision >= 10 digits");
  PrecisionScope scope(precision);

  using State = std::array<BigFloat, 6>;
  auto to_jet = [](const BigFloat& a, const BigFloat& b, const BigFloat& c) {
    return JetRational{to_rational(a), to_rational(b), to_rational(c)};
  };
  // Derivative of (x, y, u, vx, vy, vu).
  auto field = [&](const State& s) {
    auto loc = localize(ode, to_jet(s[0], s[1], s[2]));
    JetRational v = to_jet(s[3], s[4], s[5]);
    auto [a, b] = params_for(loc, v);
    auto j = jet_at(loc, {1, 1, a, b, 0});
    Rational omega = v[1] - loc.p[2] * v[0];
    for (int i = 0; i < 3; ++i)
      if (j.velocity[i] != v[i] / omega) throw DomainError("chain direction field degenerates");
    State d;
    for (int i = 0; i < 3; ++i) {
      d[i] = to_float(j.velocity[i]);
      d[i + 3] = to_float(j.acceleration[i]);
    }
    return d;
  };

  ChainPolyline out;
  out.step = to_float(step);
  out.alpha = alpha;
  out.beta = beta;

  auto start = chain_jet(ode, p, {1, 1, alpha, beta, 0});
  State s;
  for (int i = 0; i < 3; ++i) {
    s[i] = to_float(p[i]);
    s[i + 3] = to_float(start.velocity[i]);
  }
  const BigFloat h = out.step;
  auto axpy = [](const State& a, const BigFloat& c, const State& b) {
    State r;
    for (int i = 0; i < 6; ++i) r[i] = a[i] + c * b[i];
    return r;
  };
  auto record = [&](int n) {
    out.params.push_back(to_float(step * n));
    out.points.push_back({s[0], s[1], s[2]});
  };
  record(0);
  for (int n = 1; n <= steps; ++n) {
    State k1 = field(s);
    State k2 = field(axpy(s, h / 2, k1));
    State k3 = field(axpy(s, h / 2, k2));
    State k4 = field(axpy(s, h, k3));
    for (int i = 0; i < 6; ++i) s[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    record(n);
  }
  return out;
}

std::string chain_csv(const ChainPolyline& chain, int digits) {
  std::ostringstream os;
  os << "b,x,y,u\n";
  for (std::size_t i = 0; i < chain.points.size(); ++i) {
    const auto& q = chain.points[i];
    os << format_float(chain.params[i], digits) << ',' << format_float(q.x, digits) << ','
       << format_float(q.y, digits) << ',' << format_float(q.u, digits) << '\n';
  }
  return os.str();
}

}  // namespace odenorm
