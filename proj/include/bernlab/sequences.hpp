#pragma once

#include "bernlab/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bernlab {

// Decreasing positive sequence a_0 >= a_1 >= ... with a closed-form evaluator.
//   inv_sqrt:      a_n = scale / sqrt(n + 1)
//   inv_sqrt_log:  a_n = 1 / sqrt((n + shift) log(n + shift)), shift >= 2
//   geometric:     a_n = first * ratio^n, 0 < ratio < 1
//   explicit:      a_n = values[n], and 0 past the end of the list
class DecreasingSequence {
 public:
  enum class Kind { InvSqrt, InvSqrtLog, Geometric, Explicit };

  static DecreasingSequence inv_sqrt(const Rational& scale);
  static DecreasingSequence inv_sqrt_log(std::int64_t shift);
  static DecreasingSequence geometric(const Rational& first, const Rational& ratio);
  static DecreasingSequence explicit_values(std::vector<Rational> values);

  Kind kind() const { return kind_; }
  const Rational& scale() const { return scale_; }
  std::int64_t shift() const { return shift_; }
  const Rational& first() const { return first_; }
  const Rational& ratio() const { return ratio_; }
  const std::vector<Rational>& values() const { return values_; }
  std::string tag() const;

  double at(std::int64_t n) const;
  double sq(std::int64_t n) const;
  // a_n as an exact rational when the family allows it (geometric, explicit).
  std::optional<Rational> exact_at(std::int64_t n) const;
  // Rigorous upper bound for a_0, used for range checks.
  double sup_upper() const;

  // Index past which every a_n is zero, if any.
  std::optional<std::int64_t> support_end() const;

  // Upper bound for sum_{n > n1} (a_{n-k} - a_n)^2, for 1 <= k <= n1 + 1.
  double diff_tail_bound(std::int64_t k, std::int64_t n1) const;

  // Upper bound for sum_{n >= 1, n <= k} a_{n-1}^2 type sums is not needed; the
  // estimates below give sum_{n=0}^{k-1} a_n^2 in closed form where possible.
  double head_sq_sum(std::int64_t k) const;

 private:
  Kind kind_ = Kind::InvSqrt;
  Rational scale_ = 1;
  std::int64_t shift_ = 2;
  Rational first_ = 1;
  Rational ratio_ = 1;
  std::vector<Rational> values_;
  std::vector<double> values_d_;
};

}  // namespace bernlab
