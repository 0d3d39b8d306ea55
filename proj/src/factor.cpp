#include "bernlab/factor.hpp"

#include <stdexcept>

namespace bernlab {

namespace {

bool is_prime(const mpz_class& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

// Brent's variant; returns a nontrivial factor of composite n.
mpz_class rho(const mpz_class& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    mpz_class y = 2, x, q = 1, g = 1, ys;
    unsigned long r = 1, m = 128;
    auto f = [&](const mpz_class& v) {
      mpz_class t = v * v + c;
      mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      return t;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          mpz_class d = x - y;
          q = q * abs(d);
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        mpz_class d = abs(mpz_class(x - ys));
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split(const mpz_class& n, std::map<mpz_class, long>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out[n] += 1;
    return;
  }
  // rho is hopeless on prime powers
  for (unsigned long k = 2; mpz_sizeinbase(n.get_mpz_t(), 2) / k >= 1; ++k) {
    mpz_class r;
    if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) != 0) {
      std::map<mpz_class, long> sub;
      split(r, sub);
      for (const auto& [p, e] : sub) out[p] += e * static_cast<long>(k);
      return;
    }
  }
  mpz_class d = rho(n);
  split(d, out);
  split(n / d, out);
}

}  // namespace

std::map<mpz_class, long> factorize(const mpz_class& n_in) {
  mpz_class n = abs(n_in);
  if (n == 0) throw std::invalid_argument("cannot factor 0");
  std::map<mpz_class, long> out;
  for (unsigned long p = 2; p < 10000 && n > 1; ++p) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      long e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        n /= p;
        ++e;
      }
      out[mpz_class(p)] += e;
    }
  }
  split(n, out);
  return out;
}

}  // namespace bernlab
