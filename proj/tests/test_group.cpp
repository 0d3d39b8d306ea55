#include "bernlab/group.hpp"
#include "bernlab/rational.hpp"

#include <doctest.h>

#include <set>

using namespace bernlab;

namespace {

// Stack reduction on raw letters, independent of Word::push_back.
std::vector<Letter> stack_reduce(const std::vector<Letter>& raw) {
  std::vector<Letter> out;
  for (const Letter& l : raw) {
    if (!out.empty() && out.back().gen == l.gen && out.back().sign == -l.sign) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

std::vector<Letter> letters_of(const Word& w) {
  std::vector<Letter> out;
  for (const Syllable& s : w.syllables()) {
    for (std::int64_t i = 0; i < std::abs(s.exp); ++i) out.push_back({s.gen, s.exp > 0 ? 1 : -1});
  }
  return out;
}

GroupElement g2(const char* text) { return parse_element(Group::free(2), text); }

}  // namespace

TEST_CASE("reduction is idempotent and agrees with stack reduction, raw words up to length 12") {
  const Letter alphabet[4] = {{1, 1}, {1, -1}, {2, 1}, {2, -1}};
  std::size_t checked = 0;
  for (int len = 0; len <= 12; ++len) {
    std::vector<int> digits(len, 0);
    std::vector<Letter> raw(len);
    while (true) {
      for (int i = 0; i < len; ++i) raw[i] = alphabet[digits[i]];
      Word w = reduce(2, raw);
      std::vector<Letter> expect = stack_reduce(raw);
      std::vector<Letter> got = letters_of(w);
      bool same = got.size() == expect.size();
      for (std::size_t i = 0; same && i < got.size(); ++i) same = got[i].gen == expect[i].gen && got[i].sign == expect[i].sign;
      if (!same) FAIL("reduce disagrees with stack reduction");
      Word again = reduce(2, got);
      if (!(again == w)) FAIL("reduce not idempotent");
      ++checked;
      int i = 0;
      while (i < len && ++digits[i] == 4) digits[i++] = 0;
      if (i == len) break;
    }
  }
  CHECK(checked == 22369621);  // sum of 4^len, len = 0..12
}

TEST_CASE("sphere sizes are 2r(2r-1)^(n-1) for r = 2, 3 and n <= 7") {
  for (int r : {2, 3}) {
    Group G = Group::free(r);
    CHECK(sphere(G, 0).size() == 1);
    std::int64_t expect = 2 * r;
    for (int n = 1; n <= 7; ++n) {
      std::vector<GroupElement> s = sphere(G, n);
      CHECK(static_cast<std::int64_t>(s.size()) == expect);
      CHECK(sphere_size(G, n) == expect);
      std::set<GroupElement> distinct(s.begin(), s.end());
      CHECK(distinct.size() == s.size());
      for (const auto& g : s) REQUIRE(word_length(g) == n);
      expect *= 2 * r - 1;
    }
  }
  CHECK(sphere_size(Group::integers(), 5) == 2);
  CHECK(ball(Group::free(2), 6).size() == 1457);
}

TEST_CASE("group axioms on ball(3)") {
  Group G = Group::free(2);
  auto B = ball(G, 3);
  GroupElement e = GroupElement::identity(G);
  for (const auto& g : B) {
    CHECK(mul(g, e) == g);
    CHECK(mul(e, g) == g);
    CHECK(mul(g, inv(g)).is_identity());
    CHECK(inv(inv(g)) == g);
    for (const auto& h : B) {
      REQUIRE(inv(mul(g, h)) == mul(inv(h), inv(g)));
      for (const auto& k : B) {
        if (mul(mul(g, h), k) != mul(g, mul(h, k))) FAIL("associativity");
      }
    }
  }
}

TEST_CASE("descending sign changes are inversion invariant on ball(6)") {
  for (const auto& g : ball(Group::free(2), 6)) {
    REQUIRE(descending_sign_changes(g) == descending_sign_changes(inv(g)));
  }
  CHECK(descending_sign_changes(g2("a b^-1")) == 1);
  CHECK(descending_sign_changes(g2("a^-1 b")) == 0);
  CHECK(descending_sign_changes(g2("a^2 b^-1 a^3 b^-2")) == 2);
  CHECK(descending_sign_changes(g2("a^-1 b^2 a^-3")) == 1);
  CHECK(descending_sign_changes(g2("e")) == 0);
}

TEST_CASE("parsing, formatting and the integer group") {
  GroupElement g = g2("a b^-1 a a");
  CHECK(word_length(g) == 4);
  CHECK(format_element(g) == "a b^-1 a^2");
  CHECK(parse_element(Group::free(2), format_element(g)) == g);
  CHECK(g2("a a^-1").is_identity());
  CHECK_THROWS_AS(parse_element(Group::free(2), "c"), ValidationError);
  GroupElement k = parse_element(Group::integers(), "-7");
  CHECK(k.integer() == -7);
  CHECK(word_length(k) == 7);
  CHECK(mul(k, GroupElement(std::int64_t{3})).integer() == -4);
}

TEST_CASE("alternating exponents and classes") {
  auto ex = alternating_exponents(g2("b^2 a^-1"));
  CHECK(ex == std::vector<std::int64_t>{0, 2, -1});
  CHECK(w_class(g2("b a^2")) == WClass::Wa);
  CHECK(w_class(g2("a b")) == WClass::Wb);
  CHECK(w_class(g2("a b^-1")) == WClass::W);
  CHECK(w_class(g2("e")) == WClass::W);
  CHECK(e_class(g2("e")) == EClass::Identity);
  CHECK(e_class(g2("b a^-3")) == EClass::Ea);
  CHECK(pi_a(g2("b a^-3")) == -3);
  CHECK(pi_b(g2("a b^2")) == 2);
  CHECK_THROWS_AS(pi_a(g2("a b")), ValidationError);
}
