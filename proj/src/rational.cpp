#include "bernlab/rational.hpp"

#include <cctype>
#include <cmath>

namespace bernlab {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw ValidationError("empty rational");

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    // decimal literal: exact conversion of the digits, never via binary64
    bool neg = s[0] == '-';
    std::string digits = s.substr(neg ? 1 : 0);
    dot = digits.find('.');
    std::string whole = digits.substr(0, dot);
    std::string frac = digits.substr(dot + 1);
    if (whole.empty()) whole = "0";
    for (char c : whole + frac) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ValidationError("malformed rational '" + s + "'");
    }
    mpz_class num(whole + frac, 10);
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return neg ? Rational(-q) : q;
  }

  Rational q;
  if (q.set_str(s, 10) != 0) throw ValidationError("malformed rational '" + s + "'");
  if (q.get_den() == 0) throw ValidationError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

Rational dyadic_floor(double x, int bits) {
  if (!(x >= 0)) throw std::invalid_argument("dyadic_floor of negative value");
  double scaled = std::floor(std::ldexp(x, bits));
  mpz_class den = 1;
  den <<= bits;
  Rational q(mpz_class(scaled), den);
  q.canonicalize();
  return q;
}

}  // namespace bernlab
