#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "packsim/fraction.hpp"

namespace packsim {

/// Arbitrary-precision rational used on the oracle side (workload LPs,
/// rounded bounds). Simulation hot paths stay on the integer size grid and
/// never touch this type.
using Rational = boost::multiprecision::cpp_rational;

inline Rational to_rational(const Frac& f) { return Rational(f.num, f.den); }

inline double rational_to_double(const Rational& r) { return r.template convert_to<double>(); }

inline std::string rational_str(const Rational& r) {
    if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline Rational parse_rational(const std::string& text) { return to_rational(parse_frac(text)); }

}  // namespace packsim
