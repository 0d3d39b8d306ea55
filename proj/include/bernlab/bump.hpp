#pragma once

#include "bernlab/bounded.hpp"
#include "bernlab/rational.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

namespace bernlab {

// Concatenation of tents: on [b_n, b_n + 2 a_n] the function H rises with
// slope 1/a_n to 1 and falls back to 0, with a_0 = 1, a_n = ceil(delta n^2)
// and delta = min(1, 1/(144 D^2)). H vanishes on (-inf, 0].
class BumpCocycle {
 public:
  static BumpCocycle build(const Rational& D);

  BumpCocycle(const BumpCocycle& other);
  BumpCocycle& operator=(const BumpCocycle&) = delete;

  const Rational& D() const { return D_; }
  const Rational& delta() const { return delta_; }
  double delta_d() const { return delta_d_; }

  std::int64_t a(std::int64_t n) const;
  // b_n for tabulated n; throws past the table.
  std::int64_t b(std::int64_t n) const;
  // Index of the bump whose half-open range (b_n, b_n + 2 a_n] contains m >= 1.
  std::int64_t bump_of(std::int64_t m) const;

  double H(std::int64_t m) const;
  Rational H_exact(std::int64_t m) const;

  // ||gamma_k||^2 with gamma_k(m) = H(m) - H(m - k). The error radius is kept
  // below tol * max(1, value) unless max_bumps is reached first, in which case
  // the result is flagged as not converged (its bracket remains valid).
  BoundedValue gamma_norm_sq(std::int64_t k, double tol, std::int64_t max_bumps = 100'000'000) const;

  // sum_{m > m0} gamma_k(m)^2.
  BoundedValue gamma_tail(std::int64_t k, std::int64_t m0, double tol) const;

  // Oracle: term-by-term sum over the first n_bumps bumps plus the analytic tail.
  BoundedValue gamma_norm_sq_direct(std::int64_t k, std::int64_t n_bumps) const;

  // Certified bracket for sum_{n > N} 1/a_n, N >= 1.
  std::pair<double, double> inverse_tail(std::int64_t N) const;
  // Certified bracket for the bump contributions n > N to ||gamma_k||^2; needs a_N >= k.
  std::pair<double, double> bump_tail(std::int64_t k, std::int64_t N) const;

  std::int64_t table_size() const { return static_cast<std::int64_t>(b_.size()); }

 private:
  BumpCocycle() = default;

  struct Partial {
    long double sum = 0;
    std::int64_t terms = 0;
  };
  // Adds bumps n in [from, to] to acc; closed form once a_{n-1} >= k.
  void add_bumps(std::int64_t k, std::int64_t from, std::int64_t to, Partial& acc) const;
  BoundedValue finish(std::int64_t k, std::int64_t N, const Partial& acc, bool converged) const;
  bool at_rounding_floor(std::int64_t k, std::int64_t N, const Partial& acc) const;

  Rational D_;
  Rational delta_;
  double delta_d_ = 1;
  __int128 dnum_ = 1;
  __int128 dden_ = 1;
  std::vector<std::int64_t> b_;

  mutable std::mutex memo_mutex_;
  mutable std::map<std::int64_t, BoundedValue> memo_;
};

// Lower and upper bounds for the trigamma function psi'(x), x > 0.
std::pair<double, double> trigamma_bounds(double x);

}  // namespace bernlab
