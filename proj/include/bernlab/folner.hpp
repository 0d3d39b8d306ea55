#pragma once

#include "bernlab/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bernlab {

// Proper weight on Z along the enumeration g_0 = 0, g_1 = 1, g_2 = -1, g_3 = 2, ...
struct PhiSpec {
  enum class Kind { Log1p, SqrtLog };
  Kind kind = Kind::Log1p;
  Rational alpha = 1;

  // phi(g_k): alpha log(1 + k) or alpha sqrt(log(1 + k)).
  double at_index(std::int64_t k) const;
  std::string describe() const;
  static PhiSpec parse(const std::string& text);  // "log1p", "log1p:1/16", "sqrt_log:2"
};

std::int64_t enumerate_integers(std::int64_t k);
std::int64_t enumeration_index(std::int64_t g);

struct FolnerInterval {
  std::int64_t start = 0;
  std::int64_t length = 1;
  Rational value;  // eps_n / sqrt(length)
};

struct FolnerCocycle {
  PhiSpec phi;
  Rational bound;  // every value lies in [0, bound)
  std::vector<Rational> eps;  // eps_1, ..., eps_N
  std::vector<FolnerInterval> intervals;  // A_1, ..., A_N

  // sum_{n<=k} eps_n^2 <= phi(g_k)^2 / 2 for every k >= 1.
  bool budget_condition() const;
  // eps_n^2 |g_k + A_n (sym diff) A_n| / |A_n| <= eps_k^2 2^-n for 1 <= k <= n.
  bool folner_condition() const;
};

// Greedy construction over a finite horizon: eps_n is a dyadic rational below
// bound / sqrt(n) and within the phi budget; A_n are consecutive intervals of
// length 4^j, the smallest power satisfying the symmetric-difference condition.
FolnerCocycle build_folner(const PhiSpec& phi, const Rational& bound, int horizon = 10);

}  // namespace bernlab
