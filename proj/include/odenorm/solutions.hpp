#pragma once

// Passing between an ODE y'' = F(x, y, u) and its manifold of solutions
// y = Phi(x, a, b), where (a, b) = (y'(0), y(0)) label the solutions.

#include <array>

#include "odenorm/invariants.hpp"
#include "odenorm/pseries.hpp"

namespace odenorm {

/// y = Phi(x, a, b) with Phi = b + a x + (terms of weight >= 3).
struct SolutionManifold {
  TruncatedSeries phi;
};

/// Throws DomainError unless phi lives in (x, a, b) and has the shape above.
void check_shape(const SolutionManifold& m);

/// (x, y) -> (f(x, y), g(x, y)).
struct PointMap {
  TruncatedSeries f;
  TruncatedSeries g;
};

/// (x, y, a, b) -> (f(x, y), g(x, y), lam(a, b), mu(a, b)).
struct CoupledMap {
  TruncatedSeries f;
  TruncatedSeries g;
  TruncatedSeries lam;
  TruncatedSeries mu;
};

/// (x, y, u) -> (X, Y, U), the action of a point map on 1-jets.
struct JetMap {
  TruncatedSeries X;
  TruncatedSeries Y;
  TruncatedSeries U;
};

PointMap identity_point_map(int trunc);
CoupledMap identity_coupled_map(int trunc);

/// outer o inner.
PointMap compose(const PointMap& outer, const PointMap& inner);
CoupledMap compose(const CoupledMap& outer, const CoupledMap& inner);

/// Compositional inverse of a point map with invertible linear part.
PointMap invert(const PointMap& h);

/// The manifold Phi* with g(x, Phi) = Phi*(f(x, Phi), lam(a, b), mu(a, b)).
SolutionManifold transport(const SolutionManifold& m, const CoupledMap& h);

struct Recentered {
  OdeJet ode;
  PointMap map;
};

/// Moves the 1-jet p = (x0, y0, u0) to the origin and removes F(p) by the
/// shift y -> y - y0 - u0 (x - x0) - F(p)/2 (x - x0)^2. A nonzero p needs an
/// exact polynomial F.
Recentered recenter(const OdeJet& ode, const std::array<Rational, 3>& p);

/// Solves Phi_xx = F(x, Phi, Phi_x), Phi(0) = b, Phi_x(0) = a to weight W.
/// Needs F.trunc >= W - 2.
SolutionManifold integrate_to_manifold(const OdeJet& ode, int weight);

/// F(x, y, u) = Phi_xx(x, A, B) where Phi(x, A, B) = y, Phi_x(x, A, B) = u.
/// The result is truncated at phi.trunc - 2.
OdeJet manifold_to_ode(const SolutionManifold& m);

/// u -> (g_x + g_y u) / (f_x + f_y u) together with (f, g).
JetMap prolong_map(const PointMap& h);

/// The ODE satisfied by the images of solutions under h, to weight W.
/// h must fix the origin with g_x(0, 0) = 0. If the image ODE has a nonzero
/// value at the origin it is removed by a final y -> y - c x^2.
OdeJet transform_ode(const OdeJet& ode, const PointMap& h, int weight);

}  // namespace odenorm
