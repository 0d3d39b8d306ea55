#pragma once

#include <gmpxx.h>

#include <map>

namespace bernlab {

// Prime factorization of |n| >= 1 as prime -> exponent (trial division, then Pollard rho).
std::map<mpz_class, long> factorize(const mpz_class& n);

}  // namespace bernlab
