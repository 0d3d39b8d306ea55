#include "bernlab/cocycles.hpp"
#include "bernlab/presets.hpp"

#include <doctest.h>

#include <cmath>

using namespace bernlab;

namespace {

Rational Q(const char* s) { return parse_rational(s); }
GroupElement Z(std::int64_t k) { return GroupElement(k); }

ActionSpec zseq(DecreasingSequence a, std::int64_t n0 = 1) {
  ActionSpec s;
  s.group = Group::integers();
  s.family = ZSequence{Q("1/2"), n0, std::move(a)};
  s.delta = Q("1/4");
  validate_spec(s);
  return s;
}

ActionSpec free_product() {
  ActionSpec s;
  s.group = Group::free(2);
  s.family = FreeProductW{BaseMeasure::parse("2/3,1/3"), BaseMeasure::parse("1/3,2/3"), 1};
  s.delta = Q("1/3");
  validate_spec(s);
  return s;
}

bool consistent(const NormResult& a, const NormResult& b, double slack) {
  if (a.exact && b.exact) return *a.exact == *b.exact;
  return overlaps(a.value, b.value, slack);
}

}  // namespace

TEST_CASE("WSplit norms against hand values") {
  ActionSpec s = f2_wsplit();
  auto n = [&](const char* w) { return *norm_sq(s, parse_element(s.group, w)).exact; };
  CHECK(n("e") == 0);
  CHECK(n("a") == Q("1/100"));
  CHECK(n("b^-1") == Q("1/100"));
  CHECK(n("a^3") == Q("3/100"));
  // alpha = 1/10, beta = -1/10: one descending pair adds -2 alpha beta
  CHECK(n("a b^-1") == Q("4/100"));
  CHECK(n("a^-1 b") == Q("2/100"));
  CHECK(n("a^2 b^-1 a^3 b^-2") == Q("12/100"));
  s.multiplicity = 7;
  CHECK(*norm_sq(s, parse_element(s.group, "a")).exact == Q("7/100"));
}

TEST_CASE("cocycle identity, exact, g and h in ball(3), x in ball(5)") {
  ActionSpec s = f2_wsplit();
  auto B3 = ball(s.group, 3);
  auto B5 = ball(s.group, 5);
  for (const auto& g : B3) {
    GroupElement gi = inv(g);
    for (const auto& h : B3) {
      GroupElement gh = mul(g, h);
      for (const auto& x : B5) {
        Rational lhs = *cocycle_coeff_exact(s, gh, x);
        Rational rhs = *cocycle_coeff_exact(s, g, x) + *cocycle_coeff_exact(s, h, mul(gi, x));
        if (lhs != rhs) FAIL("cocycle identity fails at " << format_element(g) << ", " << format_element(h));
      }
    }
  }
}

TEST_CASE("inverse invariance of the norm for every family") {
  for (const char* name : {"f2-wsplit", "f2-wsplit-512", "f2-dissipative"}) {
    ActionSpec s = preset(name);
    for (const auto& g : ball(s.group, 5)) {
      NormResult a = norm_sq(s, g, 1e-9), b = norm_sq(s, inv(g), 1e-9);
      INFO(name, " ", format_element(g));
      REQUIRE(consistent(a, b, 1e-12 * std::max(1.0, a.value.value)));
    }
  }
  {
    ActionSpec s = free_product();
    for (const auto& g : ball(s.group, 5)) REQUIRE(consistent(norm_sq(s, g), norm_sq(s, inv(g)), 0));
  }
  for (const char* name : {"explicit-z-sqrt6", "explicit-z(1/3)", "folner-z"}) {
    ActionSpec s = preset(name);
    for (std::int64_t k = 1; k <= 50; ++k) {
      NormResult a = norm_sq(s, Z(k), 1e-10), b = norm_sq(s, Z(-k), 1e-10);
      INFO(name, " k=", k);
      REQUIRE(consistent(a, b, 1e-12));
    }
  }
  ActionSpec z = f2_dissipative(36);
  z.group = Group::integers();
  z.delta = z.as<SpecialCocycle>()->bump->delta();
  for (std::int64_t k = 1; k <= 50; ++k) {
    NormResult a = norm_sq(z, Z(k), 1e-9), b = norm_sq(z, Z(-k), 1e-9);
    INFO("special on Z, k=", k);
    REQUIRE(consistent(a, b, 1e-9 * a.value.value));
  }
}

TEST_CASE("closed form agrees with the oracle, finitely supported families") {
  for (const char* name : {"f2-wsplit", "f2-wsplit-512"}) {
    ActionSpec s = preset(name);
    for (const auto& g : ball(s.group, 4)) {
      NormResult a = norm_sq(s, g), o = norm_sq_bruteforce(s, g, word_length(g) + 2);
      REQUIRE(a.exact);
      REQUIRE(o.exact);
      REQUIRE(*a.exact == *o.exact);
    }
  }
  ActionSpec fp = free_product();
  for (const auto& g : ball(fp.group, 4)) {
    NormResult a = norm_sq(fp, g), o = norm_sq_bruteforce(fp, g, word_length(g) + 2);
    INFO(format_element(g));
    REQUIRE(consistent(a, o, 0));
  }
  ActionSpec fo = preset("folner-z");
  for (std::int64_t k : {1, 2, 3, 17, 64, 200, -5, -99}) {
    NormResult a = norm_sq(fo, Z(k)), o = norm_sq_bruteforce(fo, Z(k), 50000);
    REQUIRE(a.exact);
    REQUIRE(o.exact);
    CHECK(*a.exact == *o.exact);
  }
}

TEST_CASE("sequence and special norms agree with the oracle within err") {
  for (const char* name : {"explicit-z-sqrt6", "explicit-z(1/3)"}) {
    ActionSpec s = preset(name);
    for (std::int64_t k : {1, 2, 5, 40, -7, 300}) {
      NormResult a = norm_sq(s, Z(k), 1e-10), o = norm_sq_bruteforce(s, Z(k), 200000);
      INFO(name, " k=", k, " ", a.value.value, " +- ", a.value.err, " vs ", o.value.value, " +- ", o.value.err);
      CHECK(o.value.converged);
      CHECK(overlaps(a.value, o.value, 1e-13));
    }
  }
  ActionSpec sp = f2_dissipative(36);
  for (const auto& g : ball(sp.group, 3)) {
    NormResult a = norm_sq(sp, g, 1e-8), o = norm_sq_bruteforce(sp, g, 400);
    INFO(format_element(g), " ", a.value.value, " +- ", a.value.err, " vs ", o.value.value, " +- ", o.value.err);
    REQUIRE(overlaps(a.value, o.value, 1e-9 * a.value.value));
  }
}

TEST_CASE("independent sum for explicit-z-sqrt6 at k = 1") {
  // F(n) = 1/2 + 1/(6 sqrt n) for n >= 1, 1/2 otherwise
  long double sum = 1.0L / 36;
  const std::int64_t N = 4'000'000;
  for (std::int64_t h = 2; h <= N; ++h) {
    long double d = 1 / std::sqrt((long double)(h - 1)) - 1 / std::sqrt((long double)h);
    sum += d * d / 36;
  }
  // (n^-1/2 - (n+1)^-1/2)^2 <= n^-3 / 4, summed beyond N
  long double tail = 1.0L / (8.0L * N * N * 36);
  NormResult r = norm_sq(explicit_z_sqrt6(), Z(1), 1e-14);
  CHECK(r.value.lo() <= double(sum + tail) + 1e-15);
  CHECK(r.value.hi() >= double(sum) - 1e-15);
}

TEST_CASE("translate-function sandwich on three sequences, k = 1..1000") {
  std::vector<ActionSpec> specs = {
      zseq(DecreasingSequence::inv_sqrt(Q("1/6"))),
      zseq(DecreasingSequence::inv_sqrt_log(9), 9),
      zseq(DecreasingSequence::geometric(Q("1/5"), Q("9/10"))),
  };
  for (const auto& s : specs) {
    const auto& a = s.as<ZSequence>()->a;
    long double head = 0;
    for (std::int64_t k = 1; k <= 1000; ++k) {
      head += a.sq(k - 1);
      NormResult r = norm_sq(s, Z(k), 1e-6);
      INFO(a.tag(), " k=", k);
      REQUIRE(r.value.hi() >= double(head) * (1 - 1e-12));
      REQUIRE(r.value.lo() <= 2 * double(head) * (1 + 1e-12));
    }
  }
}

TEST_CASE("special cocycle on F2 grows at least (D/16)|g|") {
  for (const char* D : {"1/2", "1", "36"}) {
    ActionSpec s = f2_dissipative(Q(D));
    const auto* sp = s.as<SpecialCocycle>();
    double bound = sp->D.get_d() / 16;
    for (const auto& g : ball(s.group, 6)) {
      NormResult r = norm_sq(s, g, 1e-6);
      INFO("D=", D, " g=", format_element(g));
      REQUIRE(r.value.lo() >= bound * word_length(g) * (1 - 1e-12));
    }
  }
}

TEST_CASE("coordinate sets and growth rows") {
  ActionSpec s = f2_wsplit();
  GroupElement g = parse_element(s.group, "a b^-1 a");
  CoordinateSet cs = coordinate_set(s, g, 1e-12);
  double sum = 0;
  for (auto [a, b] : cs.pairs) sum += (a - b) * (a - b);
  CHECK(sum == doctest::Approx(norm_sq(s, g).value.value).epsilon(1e-14));
  CHECK(cs.tail_mass == 0);

  auto rows = growth(explicit_z_sqrt6(), 64, 1e-10);
  REQUIRE(rows.size() == 64);
  for (const auto& r : rows) {
    CHECK(r.value.hi() >= r.lower_bound);
    CHECK(r.value.lo() <= r.upper_bound);
  }
  auto frows = growth(s, 3);
  REQUIRE(frows.size() >= 3);
}

TEST_CASE("special rays cover prefixes") {
  GroupElement g = parse_element(Group::free(2), "a b^-1");
  auto rays = special_rays(g);
  CHECK(!rays.empty());
  for (const auto& r : rays) CHECK(word_length(r.prefix) <= 2);
}
