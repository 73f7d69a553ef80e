#pragma once

#include "polstar/enclosure.hpp"
#include "polstar/integer.hpp"
#include "polstar/rational.hpp"
#include "polstar/real.hpp"

namespace polstar {

/// Nearest multiple of 2^-m to x, ties to the even scaled integer.
Rational round_to_multiple(const Rational& x, long m);
Rational round_to_multiple(const Real& x, long m);

/// floor(2^m * x), exact.
Int floor_scaled(const Rational& x, long m);
/// ceil(2^m * x), exact.
Int ceil_scaled(const Rational& x, long m);

/// Enclosure variants keep every admissible integer: floor uses the upper
/// end, ceil the lower end.
Int floor_scaled(const Enclosure& x, long m);
Int ceil_scaled(const Enclosure& x, long m);

}  // namespace polstar
