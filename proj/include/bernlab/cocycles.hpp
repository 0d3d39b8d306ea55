#pragma once

#include "bernlab/bounded.hpp"
#include "bernlab/marginals.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bernlab {

// c_g(h) = F(h) - F(g^-1 h), for two-point families.
std::optional<Rational> cocycle_coeff_exact(const ActionSpec& spec, const GroupElement& g, const GroupElement& h);
double cocycle_coeff(const ActionSpec& spec, const GroupElement& g, const GroupElement& h);

struct NormResult {
  BoundedValue value;
  std::optional<Rational> exact;  // set in rational mode, err = 0
  std::string method;
};

// ||c_g||^2 over all m copies, with err <= tol in float mode.
NormResult norm_sq(const ActionSpec& spec, const GroupElement& g, double tol = 1e-9);

// Independent oracle: direct sum of c_g(h)^2 over a finite region plus the
// family tail bound. The region is ball(radius), except for the special family
// on F_2, where it is the rays p x^e (p a prefix of g) with |e| <= radius.
NormResult norm_sq_bruteforce(const ActionSpec& spec, const GroupElement& g, std::int64_t radius);

// Coordinates i = g^-1 h where mu_i and mu_{g i} differ, as pairs
// (a, b) = (F(i), F(g i)), together with a bound on the c_g mass left out.
struct CoordinateSet {
  std::vector<std::pair<double, double>> pairs;
  // multi-point base spaces: (mu_i, mu_{g i}) in full
  std::vector<std::pair<std::vector<double>, std::vector<double>>> general;
  double tail_mass = 0;  // upper bound for the omitted sum of c_g(h)^2, one copy
  bool tail_certified = true;
};
CoordinateSet coordinate_set(const ActionSpec& spec, const GroupElement& g, double tol);

struct GrowthRow {
  std::int64_t index = 0;  // |g| on F_n, k on Z
  std::string element;
  BoundedValue value;
  double lower_bound = 0;
  double upper_bound = 0;
};
// Z: one row per k = 1..radius with the translate-function sandwich (ZSequence)
// or the family's own bounds. F_n: one row per sphere radius with the min and
// max of ||c_g||^2 over the sphere.
std::vector<GrowthRow> growth(const ActionSpec& spec, std::int64_t radius, double tol = 1e-9);

// Support of the special cocycle on F_2: for each letter prefix p of g and each
// generator x not ending p, the ray p x^e. Also used by the oracle.
struct Ray {
  GroupElement prefix;
  int gen;
};
std::vector<Ray> special_rays(const GroupElement& g);

}  // namespace bernlab
