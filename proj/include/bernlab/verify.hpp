#pragma once

#include "bernlab/bounded.hpp"
#include "bernlab/marginals.hpp"

#include <string>
#include <vector>

namespace bernlab {

// One inequality lhs <= rhs at one element. It passes unless the brackets
// certify a violation (lhs.lo() > rhs.hi()).
struct BoundCheck {
  std::string inequality;
  std::string element;
  BoundedValue lhs, rhs;
  double margin = 0;  // rhs.value - lhs.value
  bool pass = true;
};

struct VerifyReport {
  std::vector<BoundCheck> checks;
  std::int64_t failures = 0;
};

// Default grid: ball(4) on F_n, k = +-1..1000 on Z.
std::vector<GroupElement> default_grid(const ActionSpec& spec);

// Runs every inequality that applies to the family:
//   sqrt-upper   int sqrt(omega) <= exp(-||c||^2 / 2)
//   sqrt-lower   exp(-(3/5) ||c||^2) <= int sqrt(omega)     (delta >= 1/3)
//   negsq        log int omega^-2 <= kappa0 ||c||^2
//   translate    m sum_{n<|k|} a_n^2 <= ||c_k||^2 <= 2 m sum_{n<|k|} a_n^2   (zsequence)
//   norm-oracle  closed form == direct sum                   (finitely supported families)
//   bump-growth  ||c_g||^2 >= m s^2 D |g| on F_2, m s^2 D |k|^{3/2} on Z   (special)
VerifyReport verify_bounds(const ActionSpec& spec, const std::vector<GroupElement>& grid, double tol = 1e-5);

}  // namespace bernlab
