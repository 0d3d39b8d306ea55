#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace bernlab {

using Rational = mpq_class;

// Thrown for malformed input (specs, words, measures); the CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parses "p/q", "p" or a plain decimal such as "0.25" into a canonical rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

// Largest dyadic rational m / 2^bits not exceeding x (x >= 0).
Rational dyadic_floor(double x, int bits);

}  // namespace bernlab
