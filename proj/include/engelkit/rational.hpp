#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace engelkit {

using Rational = mpq_class;

// Accepts integers, fractions "p/q" and decimals "0.125".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);
bool is_integer(const Rational& q);

}  // namespace engelkit
