#pragma once

// Order-4 relative invariants of y'' = F(x, y, u) and pointwise flatness.

#include <array>
#include <string>

#include "odenorm/pseries.hpp"

namespace odenorm {

/// Right-hand side F(x, y, u) of y'' = F, expanded around `base`.
struct OdeJet {
  TruncatedSeries F;
  /// The 1-jet (x0, y0, u0) the series is centered at.
  std::array<Rational, 3> base{};
  /// F is an exact polynomial whose every monomial is stored.
  bool polynomial = false;
};

/// Wraps a series in (x, y, u) centered at the origin.
OdeJet make_jet(TruncatedSeries F, bool polynomial = false);

/// A polynomial jet is exact at every weight: raises its truncation to at
/// least `trunc`. Series jets are returned unchanged.
OdeJet lift(const OdeJet& ode, int trunc);

/// D G = G_x + u G_y + F G_u.
TruncatedSeries total_derivative(const OdeJet& ode, const TruncatedSeries& G);

struct TresseInvariants {
  TruncatedSeries I1;
  TruncatedSeries I2;
};

/// I1 = F_uuuu and
/// I2 = D^2(F_uu) - F_u D(F_uu) - 4 D(F_yu) + 6 F_yy - 3 F_y F_uu + 4 F_u F_yu,
/// both truncated at F.trunc - 4.
TresseInvariants tresse_invariants(const OdeJet& ode);

enum class PointKind { flat, semi_flat, strongly_nonflat };

struct PointClass {
  PointKind kind;
  Rational I1_at;
  Rational I2_at;
};

/// Classifies the origin by the values of I1 and I2 there.
PointClass classify_point(const OdeJet& ode);

std::string to_string(PointKind kind);

}  // namespace odenorm
