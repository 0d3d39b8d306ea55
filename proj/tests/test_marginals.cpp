#include "bernlab/marginals.hpp"
#include "bernlab/presets.hpp"
#include "bernlab/typeclass.hpp"

#include <doctest.h>

#include <cmath>

using namespace bernlab;

namespace {

Rational Q(const char* s) { return parse_rational(s); }

}  // namespace

TEST_CASE("base measures parse and validate") {
  BaseMeasure m = BaseMeasure::parse("2/3,1/3");
  CHECK(m.p == std::vector<Rational>{Q("2/3"), Q("1/3")});
  CHECK(m.exact);
  CHECK_THROWS_AS(BaseMeasure::parse("1/2,1/3"), ValidationError);
  CHECK_THROWS_AS(BaseMeasure::parse("3/2,-1/2"), ValidationError);
  CHECK_THROWS_AS(BaseMeasure::parse("1,0"), ValidationError);
  CHECK_THROWS_AS(BaseMeasure::parse("x,y"), ValidationError);
  CHECK(BaseMeasure::parse(m.to_string()) == m);
}

TEST_CASE("lambda builder") {
  auto [mu0, mu1] = measures_from_lambda(Q("1/2"));
  CHECK(mu0.p == std::vector<Rational>{Q("2/3"), Q("1/3")});
  CHECK(mu1.p == std::vector<Rational>{Q("1/3"), Q("2/3")});
  CHECK(t_values(mu0, mu1) == std::vector<Rational>{Q("1/2"), Q("2")});
  CHECK_THROWS_AS(measures_from_lambda(Q("3/2")), ValidationError);
  CHECK_THROWS_AS(measures_from_lambda(0), ValidationError);
}

TEST_CASE("(a, b) builder, exact") {
  // e^a = 2, e^b = 3/2: mu0(0) = (2/3 - 1/2) / (1 - 1/2) = 1/3
  auto [mu0, mu1] = measures_from_ab(Q("2"), Q("3/2"));
  CHECK(mu0.p == std::vector<Rational>{Q("1/3"), Q("2/3")});
  CHECK(mu1.p == std::vector<Rational>{Q("1/2"), Q("1/2")});
  CHECK(t_values(mu0, mu1) == std::vector<Rational>{Q("3/2"), Q("3/4")});

  auto [n0, n1] = measures_from_ab(Q("3"), Q("1"));
  CHECK(n0.size() == 3);
  CHECK(t_values(n0, n1) == std::vector<Rational>{Q("1"), Q("3"), Q("1/3")});

  CHECK_THROWS_AS(measures_from_ab(Q("2"), Q("2")), ValidationError);
  CHECK_THROWS_AS(measures_from_ab(Q("1"), Q("1")), ValidationError);
  CHECK_THROWS_AS(measures_from_ab(Q("2"), Q("1/2")), ValidationError);
}

TEST_CASE("(a, b) builder, float: T(0) = e^b, T(1) = e^(b-a)") {
  // a = 1, b = 0.3 is where the closed form printed for mu0(0) would give T(0) ~ 1.94
  auto [mu0, mu1] = measures_from_ab(1.0, 0.3);
  CHECK_FALSE(mu0.exact);
  CHECK(mu1.at(0) / mu0.at(0) == doctest::Approx(std::exp(0.3)).epsilon(1e-12));
  CHECK(mu1.at(1) / mu0.at(1) == doctest::Approx(std::exp(-0.7)).epsilon(1e-12));
  auto [t0, t1] = measures_from_ab(1.0, 0.0);
  CHECK(t0.size() == 3);
}

TEST_CASE("atomic eta builder") {
  auto atoms = geometric_eta({Q("1/2"), Q("1/3")});
  CHECK(atoms[0].weight == Q("1/3"));   // 1 / (2 (3/2))
  CHECK(atoms[1].weight == Q("3/16"));  // 1 / (4 (4/3))
  auto [mu0, mu1] = measures_from_atomic_eta(atoms);
  CHECK(mu0.size() == 4);
  CHECK(t_values(mu0, mu1) == std::vector<Rational>{Q("1/2"), Q("2"), Q("1/3"), Q("3")});
  for (const auto& q : mu0.p) CHECK(q > 0);
  CHECK_THROWS_AS(measures_from_atomic_eta({{Q("1"), Q("1")}}), ValidationError);
  CHECK_THROWS_AS(measures_from_atomic_eta({{Q("1/2"), Q("1")}, {Q("1/2"), Q("2")}}), ValidationError);
}

TEST_CASE("WSplit marginals depend only on the W class") {
  ActionSpec s = f2_wsplit();
  for (const auto& g : ball(s.group, 5)) {
    Rational expect = Q("1/2");
    if (w_class(g) == WClass::Wa) expect = Q("3/5");
    if (w_class(g) == WClass::Wb) expect = Q("2/5");
    REQUIRE(f_exact(s, g) == expect);
  }
}

TEST_CASE("marginals stay in [delta, 1 - delta] for every preset") {
  for (const char* name : {"f2-wsplit", "f2-wsplit-512", "explicit-z-sqrt6", "explicit-z(1/3)", "explicit-z(9/10)",
                           "folner-z", "f2-dissipative"}) {
    ActionSpec s = preset(name);
    double lo = s.delta.get_d(), hi = 1 - lo;
    std::vector<GroupElement> grid;
    if (s.group.is_free()) {
      grid = ball(s.group, 4);
    } else {
      for (std::int64_t k = -2000; k <= 2000; ++k) grid.emplace_back(k);
    }
    for (const auto& g : grid) {
      double f = f_double(s, g);
      INFO(name, " ", format_element(g));
      REQUIRE(f >= lo);
      REQUIRE(f <= hi);
    }
  }
}

TEST_CASE("sequence families match their closed forms") {
  ActionSpec s = explicit_z_sqrt6();
  for (std::int64_t n : {1, 2, 4, 9, 100, 12345}) {
    CHECK(f_double(s, GroupElement(n)) == doctest::Approx(0.5 + 1 / (6 * std::sqrt(double(n)))).epsilon(1e-14));
  }
  CHECK(f_double(s, GroupElement(std::int64_t{0})) == 0.5);
  CHECK(f_double(s, GroupElement(std::int64_t{-5})) == 0.5);

  ActionSpec e = explicit_z(Q("1/3"));
  const auto* z = e.as<ZSequence>();
  REQUIRE(z != nullptr);
  std::int64_t n = z->n0 + 50;
  double ln = std::log(double(n));
  CHECK(f_double(e, GroupElement(n)) == doctest::Approx(1.0 / 3 + 1 / std::sqrt(n * ln)).epsilon(1e-12));
}

TEST_CASE("special marginals on F2 are 1/2 +- H(pi)/4") {
  ActionSpec s = f2_dissipative(36);
  const auto* sp = s.as<SpecialCocycle>();
  REQUIRE(sp != nullptr);
  for (const auto& g : ball(s.group, 4)) {
    double expect = 0.5;
    if (e_class(g) == EClass::Ea) expect += sp->bump->H(pi_a(g)) / 4;
    if (e_class(g) == EClass::Eb) expect -= sp->bump->H(pi_b(g)) / 4;
    REQUIRE(f_double(s, g) == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("validate_spec rejects bad specs") {
  ActionSpec s = f2_wsplit();
  s.delta = Q("1/2");
  CHECK_THROWS_AS(validate_spec(s), ValidationError);
  s = f2_wsplit();
  s.multiplicity = 0;
  CHECK_THROWS_AS(validate_spec(s), ValidationError);
  s = explicit_z_sqrt6();
  s.group = Group::free(2);
  CHECK_THROWS_AS(validate_spec(s), ValidationError);
  s = f2_wsplit();
  s.family = WSplit{Q("9/10"), Q("2/5"), Q("1/2")};
  CHECK_THROWS_AS(validate_spec(s), ValidationError);
}

TEST_CASE("nonsingularity hypotheses") {
  ActionSpec s = explicit_z_sqrt6();
  auto rep = check_nonsingular_hypotheses(s, {GroupElement(std::int64_t{1}), GroupElement(std::int64_t{-3})}, 4000);
  REQUIRE(rep.lambda);
  CHECK(*rep.lambda == 0.5);
  // sup over |n| = 4000 of |F(n) - 1/2| = 1 / (6 sqrt 4000)
  CHECK(*rep.sup_deviation == doctest::Approx(1 / (6 * std::sqrt(4000.0))));
  for (const auto& p : rep.probes) {
    CHECK(p.tail_certified);
    CHECK(std::isfinite(p.sum.hi()));
  }

  ActionSpec w = f2_wsplit();
  auto wr = check_nonsingular_hypotheses(w, {parse_element(w.group, "a b")}, 4);
  CHECK(wr.probes[0].tail_certified);
  CHECK_FALSE(wr.lambda);
}
