#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace parasched {

// Exact arithmetic for every analysis-path quantity. Beware that gmpxx
// arithmetic yields expression templates: never bind them to `auto`.
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);

// Accepts "7", "-3/4", "0.125", "1.5e3". Throws Error(Errc::ParseError).
Rational parse_rational(std::string_view text);

// Canonical "num/den", or just "num" when den == 1.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

long floor_long(const Rational& q);
long ceil_long(const Rational& q);

// Exact value of a finite double (binary fraction).
Rational from_double(double x);

// Nearest fraction with the given denominator.
Rational round_to(double x, long den);

}  // namespace parasched
