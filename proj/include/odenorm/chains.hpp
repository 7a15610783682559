#pragma once

// Chains: distinguished curves in J^1 transverse to the contact planes
// dy = u dx. The chain through p with a given transverse direction is the
// preimage of the vertical line {x = a = 0} under a normalizing map chosen so
// that it maps that direction to the vertical. Its second-order jet at p
// depends only on the weight <= 5 part of the normalization, which turns the
// family of chains into a second-order ODE on J^1 traced here with RK4.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "odenorm/normalform.hpp"

namespace odenorm {

using JetRational = std::array<Rational, 3>;

struct JetPoint {
  BigFloat x;
  BigFloat y;
  BigFloat u;
};

/// The 2-jet at p of a chain, parameterized so that dy - u dx = 1 along it.
struct ChainJet {
  /// Tangent (dx/db, da/db) in the manifold coordinates recentered at p.
  Rational dx;
  Rational da;
  /// First and second derivatives of (x, y, u) along the chain.
  JetRational velocity;
  JetRational acceleration;
};

/// The chain jet at p for the normalization parameters `params`; only alpha
/// and beta select the chain, s, t and r do not affect the result. A nonzero p
/// needs a polynomial ODE.
ChainJet chain_jet(const OdeJet& ode, const JetRational& p, const NormalizationParams& params);

/// Tangent of the chain with parameters (alpha, beta) in recentered (x, a, b)
/// coordinates, normalized to unit b-component.
std::pair<Rational, Rational> chain_direction(const OdeJet& ode, const JetRational& p,
                                              const Rational& alpha, const Rational& beta);

/// The (alpha, beta) whose chain leaves p with velocity proportional to v.
/// Throws DomainError when v is tangent to the contact plane.
std::pair<Rational, Rational> direction_params(const OdeJet& ode, const JetRational& p,
                                               const JetRational& v);

struct ChainPolyline {
  std::vector<BigFloat> params;
  std::vector<JetPoint> points;
  BigFloat step;
  Rational alpha;
  Rational beta;
};

/// RK4 integration of the chain through p with direction (alpha, beta):
/// `steps` steps of size `step` in the parameter with dy - u dx = 1. Values
/// are carried with `precision` decimal digits.
ChainPolyline trace_chain(const OdeJet& ode, const JetRational& p, const Rational& alpha,
                          const Rational& beta, const Rational& step, int steps, int precision);

/// Rows "b,x,y,u" with a header line.
std::string chain_csv(const ChainPolyline& chain, int digits);

}  // namespace odenorm
