#pragma once

// Arbitrary-precision floats and their exact conversions to and from rationals.

#include <boost/multiprecision/mpfr.hpp>

#include "odenorm/pseries.hpp"

namespace odenorm {

using BigFloat = boost::multiprecision::mpfr_float;

/// Nearest float at the current default precision.
BigFloat to_float(const Rational& q);

/// Exact rational value of a float.
Rational to_rational(const BigFloat& v);

/// Sets the precision (decimal digits) of newly created BigFloats for one
/// scope. The default is process-wide in this Boost version.
class PrecisionScope {
 public:
  explicit PrecisionScope(int digits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

/// Scientific notation with `digits` significant digits; "0" for zero.
std::string format_float(const BigFloat& v, int digits);

}  // namespace odenorm
