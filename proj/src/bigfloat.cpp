#include "odenorm/bigfloat.hpp"

#include <mpfr.h>

#include <algorithm>

namespace odenorm {

BigFloat to_float(const Rational& q) {
  BigFloat v;
  mpfr_set_q(v.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return v;
}

Rational to_rational(const BigFloat& v) {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), v.backend().data());
  return q;
}

PrecisionScope::PrecisionScope(int digits) : saved_(BigFloat::default_precision()) {
  BigFloat::default_precision(static_cast<unsigned>(digits));
}

PrecisionScope::~PrecisionScope() { BigFloat::default_precision(saved_); }

std::string format_float(const BigFloat& v, int digits) {
  if (v == 0) return "0";
  // str() counts digits after the point.
  return v.str(std::max(digits, 1) - 1, std::ios_base::scientific);
}

}  // namespace odenorm
