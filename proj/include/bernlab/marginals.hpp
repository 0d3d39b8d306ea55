#pragma once

#include "bernlab/bounded.hpp"
#include "bernlab/bump.hpp"
#include "bernlab/group.hpp"
#include "bernlab/rational.hpp"
#include "bernlab/sequences.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bernlab {

// Probability vector on a finite base space {0, ..., size-1}.
struct BaseMeasure {
  std::vector<Rational> p;
  bool exact = true;  // false: entries came from binary64 inputs

  std::size_t size() const { return p.size(); }
  double at(std::size_t i) const { return p[i].get_d(); }
  void validate() const;
  std::string to_string() const;
  bool operator==(const BaseMeasure& o) const { return p == o.p; }

  static BaseMeasure parse(const std::string& csv);  // "2/3,1/3"
};

// F(g) = p_a on W_a, p_b on W_b, p_w elsewhere (F_2 only).
struct WSplit {
  Rational p_a, p_b, p_w;
};

// F(n) = lambda + a_{n - n0} for n >= n0 and lambda otherwise (Z only).
struct ZSequence {
  Rational lambda;
  std::int64_t n0 = 0;
  DecreasingSequence a = DecreasingSequence::inv_sqrt(1);
};

// mu_g = mu1 when the last syllable of g is a positive power of `generator`, else mu0.
struct FreeProductW {
  BaseMeasure mu0, mu1;
  int generator = 1;
};

// F(k) = offset + value on each interval, offset elsewhere (Z only).
struct FolnerInduced {
  Rational offset;
  Rational bound;
  struct Interval {
    std::int64_t start = 0;
    std::int64_t length = 1;
    Rational value;
  };
  std::vector<Interval> intervals;
};

// F = base + scale H(.) built from the bump function H of parameter D.
// On Z: F(n) = base + scale H(n). On F_2: base + scale H(pi_a(g)) on E_a,
// base - scale H(pi_b(g)) on E_b, base at e.
struct SpecialCocycle {
  Rational D, base, scale;
  std::shared_ptr<const BumpCocycle> bump;
};

using MarginalFamily = std::variant<WSplit, ZSequence, FreeProductW, FolnerInduced, SpecialCocycle>;

std::string family_name(const MarginalFamily& f);

struct ActionSpec {
  Group group = Group::free(2);
  MarginalFamily family;
  std::int64_t multiplicity = 1;
  Rational delta;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&family);
  }
};

struct IndexPoint {
  GroupElement elem;
  std::int64_t copy = 1;
};

// Rejects specs whose marginals leave [delta, 1 - delta] or whose family does
// not fit the group.
void validate_spec(const ActionSpec& spec);

SpecialCocycle make_special(const Rational& D, const Rational& base, const Rational& scale);

// mu_g(0) as an exact rational when the family allows it.
std::optional<Rational> f_exact(const ActionSpec& spec, const GroupElement& g);
// mu_g(0) in binary64 (rounding error below 1e-15 relative).
double f_double(const ActionSpec& spec, const GroupElement& g);
BoundedValue f_value(const ActionSpec& spec, const IndexPoint& i);

// Full marginal mu_g over the base space, as doubles.
std::vector<double> marginal(const ActionSpec& spec, const GroupElement& g);
std::size_t base_size(const ActionSpec& spec);

struct NonsingularProbe {
  GroupElement g;
  BoundedValue sum;           // sum_k (F(gk) - F(k))^2 over the whole group
  double partial = 0;         // the part over the finite ball
  double tail = 0;            // certified tail bound beyond the ball
  bool tail_certified = false;
};

struct NonsingularReport {
  std::vector<NonsingularProbe> probes;
  std::optional<double> lambda;            // limit value, Z families
  std::optional<double> sup_deviation;     // sup |F(i) - lambda| over the sphere
  std::int64_t radius = 0;
};

NonsingularReport check_nonsingular_hypotheses(const ActionSpec& spec, const std::vector<GroupElement>& probes,
                                               std::int64_t radius);

// Two-point measures with T(0) = lambda and T(1) = 1/lambda, T = mu1/mu0.
std::pair<BaseMeasure, BaseMeasure> measures_from_lambda(const Rational& lambda);

// Exact version: takes e^a > 1 and e^b in [1, e^a). For e^b > 1 two-point
// measures with T(0) = e^b, T(1) = e^{b-a}; for e^b = 1 three-point measures
// with T = (1, e^a, e^-a).
std::pair<BaseMeasure, BaseMeasure> measures_from_ab(const Rational& exp_a, const Rational& exp_b);
// Float version in terms of a > 0 and 0 <= b < a.
std::pair<BaseMeasure, BaseMeasure> measures_from_ab(double a, double b);

struct EtaAtom {
  Rational t;       // in (0, 1)
  Rational weight;  // > 0
};
// Base space ordered (t_1,0), (t_1,1), (t_2,0), ...
std::pair<BaseMeasure, BaseMeasure> measures_from_atomic_eta(const std::vector<EtaAtom>& atoms);
// Weights 1 / (2^n (1 + t_n)), n = 1, 2, ...
std::vector<EtaAtom> geometric_eta(const std::vector<Rational>& ts);

}  // namespace bernlab
