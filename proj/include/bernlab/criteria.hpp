#pragma once

#include "bernlab/bounded.hpp"
#include "bernlab/cocycles.hpp"
#include "bernlab/marginals.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bernlab {

// delta^-2 + delta^-1 (1 - delta)^-2.
Rational kappa0(const Rational& delta);
// Smallest integer strictly above kappa0.
Rational auto_kappa(const Rational& delta);

struct PartialSum {
  std::int64_t radius = 0;
  double lower = 0;  // sum over ball(radius) of exp(-kappa ||c_g||^2), bracketed
  double upper = 0;
};
std::vector<PartialSum> criterion_partial_sums(const ActionSpec& spec, double kappa, std::int64_t radius,
                                               double tol = 1e-9);

enum class Verdict { Conservative, Dissipative, Inconclusive };
std::string to_string(Verdict v);

// sum_g exp(-||c_g||^2 / 2) <= total, from ||c_g||^2 >= slope * (length)
// (Geometric: sphere n has at most coeff * base^n elements) or from
// ||c_k||^2 >= s log(1 + |k|) on Z (PowerLaw: terms <= (1+|k|)^-exponent).
struct DissipativeCertificate {
  enum class Kind { Geometric, PowerLaw };
  Kind kind = Kind::Geometric;
  std::string lower_bound;  // the norm estimate used, in words
  double slope = 0;         // Geometric: ||c_g||^2 >= slope |g|; PowerLaw: >= slope log(1+|k|)
  double sphere_coeff = 0;  // Geometric: |S_n| <= sphere_coeff * sphere_base^n
  double sphere_base = 0;
  double rho = 0;           // Geometric: sphere_base * exp(-slope / 2)
  double exponent = 0;      // PowerLaw: slope / 2
  std::int64_t head_radius = 0;
  double head = 0;          // explicit part of the bound
  double tail = 0;          // analytic remainder
  double total = 0;

  // Recomputes rho / exponent, head and tail from the stored parameters.
  bool recheck() const;
};

// sum_g exp(-kappa ||c_g||^2) = infinity from a minorant over a witness family:
//   Constant:  terms >= factor on infinitely many g
//   PowerLaw:  terms >= factor k^-exponent, exponent <= 1
//   LogPower:  terms >= factor (log k)^-exponent
//   WordBlocks: words a^-1 b^n1 a b^m1 ... in <b, a^-1 b a>, per-block ratio r >= 1
struct ConservativeWitness {
  enum class Kind { Constant, PowerLaw, LogPower, WordBlocks };
  Kind kind = Kind::Constant;
  std::string family;
  std::string upper_bound;  // the norm estimate used, in words
  double kappa = 0;
  double factor = 0;
  double exponent = 0;
  double ratio = 0;  // WordBlocks
  double alpha = 0, beta = 0;  // WordBlocks: p_a - p_w, p_b - p_w
  double kappa_m = 0;          // kappa times multiplicity
  std::vector<std::pair<std::int64_t, double>> partial_sums;  // (budget, minorant partial sum)

  bool recheck() const;
};

struct CriterionVerdict {
  Verdict verdict = Verdict::Inconclusive;
  double kappa = 0;  // the conservative-side kappa
  std::string reason;
  std::optional<DissipativeCertificate> dissipative;
  std::optional<ConservativeWitness> conservative;
  std::vector<PartialSum> partial_sums;  // Inconclusive trajectory

  bool recheck() const;
};

// kappa: conservative-side constant; nullopt picks auto_kappa(delta).
CriterionVerdict classify_conservativity(const ActionSpec& spec, std::optional<double> kappa = std::nullopt,
                                         std::int64_t radius = 4);

// Cumulative minorant sum of the WordBlocks witness over words of total
// b-exponent at most s_max, in log space.
double word_block_partial_sum(double alpha, double beta, double kappa_m, std::int64_t s_max);

// Integral of sqrt(omega(g, .)), and of omega(g, .)^-2.
BoundedValue hellinger_product(const ActionSpec& spec, const GroupElement& g, double tol = 1e-9);
BoundedValue negsq_product(const ActionSpec& spec, const GroupElement& g, double tol = 1e-9);
// log of the integral of omega(g, .)^-2; stays finite where the integral overflows.
BoundedValue negsq_log_product(const ActionSpec& spec, const GroupElement& g, double tol = 1e-9);

double hellinger_factor(double a, double b);
double negsq_factor(double a, double b);

double kesten_norm(int rank);

struct NonamenabilityReport {
  std::vector<std::pair<GroupElement, BoundedValue>> terms;
  BoundedValue sum;
  double kesten = 0;
  double margin = 0;  // sum.lo() - kesten
  bool nonamenable = false;
};
// generators must be a symmetric free generating set {a_i, a_i^-1}; empty picks all of them.
NonamenabilityReport nonamenability_check(const ActionSpec& spec, std::vector<GroupElement> generators = {});

}  // namespace bernlab
