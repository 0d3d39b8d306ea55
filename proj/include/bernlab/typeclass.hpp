#pragma once

#include "bernlab/marginals.hpp"
#include "bernlab/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bernlab {

// Subgroup of the positive rationals under multiplication generated by finitely
// many values, through the lattice of their prime-exponent vectors.
struct RatioGroup {
  enum class Kind { Trivial, Cyclic, Dense };
  Kind kind = Kind::Trivial;
  Rational generator = 1;       // Cyclic: the generator below 1
  std::vector<Rational> basis;  // lattice basis, each element below 1
  std::vector<mpz_class> primes;
  std::vector<std::vector<mpz_class>> exponents;  // one row per input value
  int rank = 0;

  std::string describe() const;
};

RatioGroup ratio_group(const std::vector<Rational>& values);

// Exponent vector of q over the given primes; throws if q has another prime factor.
std::vector<mpz_class> exponent_vector(const Rational& q, const std::vector<mpz_class>& primes);

struct TypeLabel {
  enum class Kind { II1, IIIlambda, III1 };
  Kind kind = Kind::II1;
  Rational base = 1;  // III_lambda: lambda = base^(1/root)
  long root = 1;
  double lambda = 1;
  std::string text() const;
};

// T values mu1(x) / mu0(x).
std::vector<Rational> t_values(const BaseMeasure& mu0, const BaseMeasure& mu1);
TypeLabel type_from_values(const std::vector<Rational>& t);
TypeLabel plain_type(const BaseMeasure& mu0, const BaseMeasure& mu1);

struct StableParams {
  RatioGroup L;
  Rational t0 = 1;     // T(x0), x0 the point with the smallest T
  Rational exp_a = 1;  // Cyclic L: e^a = 1 / generator
  Rational exp_b = 1;  // e^b = T(x0) e^{ja}, reduced into [1, e^a)
  std::optional<long> k1;  // order of b in R / aZ; empty = infinite
  double a = 0, b = 0;
};

StableParams stable_params_from_values(const std::vector<Rational>& t);
StableParams stable_params(const BaseMeasure& mu0, const BaseMeasure& mu1);

struct StableTypeSet {
  std::vector<TypeLabel> types;  // complete list, or the first instances of an infinite rule
  bool infinite = false;
  std::string rule;
};
StableTypeSet stable_type_set(const StableParams& p, int instances = 10);

std::vector<Rational> sd_generators(const BaseMeasure& mu0, const BaseMeasure& mu1);

// Continued-fraction rational with the smallest denominator within rel_tol of x.
Rational rationalize(double x, double rel_tol);

// Float mode: T values rationalized to rel_tol before classification.
std::vector<Rational> approximate_t_values(const std::vector<double>& mu0, const std::vector<double>& mu1,
                                           double rel_tol);

// Values of the per-coordinate ratios mu_{g i}(x) / mu_i(x) for each element,
// and generators of the group generated by the values of omega(g, .):
// the products over i of r_i(0) and each r_i(x) / r_i(0).
struct OmegaRange {
  std::vector<Rational> ratios;
  std::vector<Rational> generators;
};
OmegaRange omega_range(const ActionSpec& spec, const std::vector<GroupElement>& elements);

std::string log_text(const Rational& q);  // "log(3/2)"

}  // namespace bernlab
