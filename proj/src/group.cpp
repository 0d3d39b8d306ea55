#include "bernlab/group.hpp"

#include "bernlab/rational.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace bernlab {

Group Group::free(int rank) {
  if (rank < 1) throw ValidationError("free group rank must be >= 1");
  return {Kind::Free, rank};
}

void Word::push_back(int gen, std::int64_t exp) {
  if (gen < 1 || gen > rank_) {
    throw ValidationError("generator index " + std::to_string(gen) + " outside rank " + std::to_string(rank_));
  }
  if (exp == 0) return;
  if (!syllables_.empty() && syllables_.back().gen == gen) {
    Syllable& last = syllables_.back();
    length_ -= std::abs(last.exp);
    last.exp += exp;
    if (last.exp == 0) {
      syllables_.pop_back();
    } else {
      length_ += std::abs(last.exp);
    }
    return;
  }
  syllables_.push_back({gen, exp});
  length_ += std::abs(exp);
}

Word Word::from_syllables(int rank, std::span<const Syllable> syllables) {
  Word w(rank);
  for (const Syllable& s : syllables) w.push_back(s.gen, s.exp);
  return w;
}

Word Word::inverse() const {
  Word w(rank_);
  w.syllables_.reserve(syllables_.size());
  for (auto it = syllables_.rbegin(); it != syllables_.rend(); ++it) {
    w.syllables_.push_back({it->gen, -it->exp});
  }
  w.length_ = length_;
  return w;
}

GroupElement GroupElement::identity(const Group& group) {
  if (group.is_free()) return GroupElement(Word(group.rank));
  return GroupElement(std::int64_t{0});
}

std::int64_t GroupElement::integer() const {
  if (!is_integer()) throw std::logic_error("element is not an integer");
  return std::get<std::int64_t>(value_);
}

const Word& GroupElement::word() const {
  if (!is_word()) throw std::logic_error("element is not a free-group word");
  return std::get<Word>(value_);
}

Group GroupElement::group() const {
  if (is_word()) return Group::free(word().rank());
  return Group::integers();
}

bool GroupElement::is_identity() const {
  return is_word() ? word().is_identity() : integer() == 0;
}

std::size_t GroupElementHash::operator()(const GroupElement& g) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  if (g.is_integer()) {
    mix(static_cast<std::uint64_t>(g.integer()));
  } else {
    mix(static_cast<std::uint64_t>(g.word().rank()) << 32);
    for (const Syllable& s : g.word().syllables()) {
      mix(static_cast<std::uint64_t>(s.gen));
      mix(static_cast<std::uint64_t>(s.exp));
    }
  }
  return static_cast<std::size_t>(h);
}

Word reduce(int rank, std::span<const Letter> letters) {
  Word w(rank);
  for (const Letter& l : letters) {
    if (l.sign != 1 && l.sign != -1) throw ValidationError("letter sign must be +1 or -1");
    w.push_back(l.gen, l.sign);
  }
  return w;
}

GroupElement mul(const GroupElement& g, const GroupElement& h) {
  if (g.is_integer() && h.is_integer()) return GroupElement(g.integer() + h.integer());
  if (!g.is_word() || !h.is_word() || g.word().rank() != h.word().rank()) {
    throw ValidationError("cannot multiply elements of different groups");
  }
  Word w = g.word();
  for (const Syllable& s : h.word().syllables()) w.push_back(s.gen, s.exp);
  return GroupElement(std::move(w));
}

GroupElement inv(const GroupElement& g) {
  if (g.is_integer()) return GroupElement(-g.integer());
  return GroupElement(g.word().inverse());
}

std::int64_t word_length(const GroupElement& g) {
  if (g.is_integer()) return std::abs(g.integer());
  return g.word().length();
}

namespace {

const Word& rank_two_word(const GroupElement& g, const char* what) {
  if (!g.is_word() || g.word().rank() != 2) {
    throw ValidationError(std::string(what) + " is only defined on F_2");
  }
  return g.word();
}

}  // namespace

std::vector<std::int64_t> alternating_exponents(const GroupElement& g) {
  const Word& w = rank_two_word(g, "alternating_exponents");
  std::vector<std::int64_t> seq;
  auto syl = w.syllables();
  if (syl.empty() || syl.front().gen != 1) seq.push_back(0);
  for (const Syllable& s : syl) seq.push_back(s.exp);
  if (syl.empty() || syl.back().gen != 1) seq.push_back(0);
  return seq;
}

std::int64_t descending_sign_changes(const GroupElement& g) {
  const Word& w = rank_two_word(g, "descending_sign_changes");
  auto syl = w.syllables();
  std::int64_t count = 0;
  for (std::size_t j = 0; j + 1 < syl.size(); ++j) {
    if (syl[j].exp >= 1 && syl[j + 1].exp <= -1) ++count;
  }
  return count;
}

namespace {

// DFS over non-backtracking extensions. Letter order: gen 1 (+), gen 1 (-), gen 2 (+), ...
void extend(Word& prefix, int last_gen, int last_sign, std::int64_t remaining, int rank,
            const std::function<void(const GroupElement&)>& fn) {
  if (remaining == 0) {
    fn(GroupElement(prefix));
    return;
  }
  for (int gen = 1; gen <= rank; ++gen) {
    for (int sign : {1, -1}) {
      if (gen == last_gen && sign == -last_sign) continue;
      prefix.push_back(gen, sign);
      extend(prefix, gen, sign, remaining - 1, rank, fn);
      prefix.push_back(gen, -sign);
    }
  }
}

}  // namespace

void for_each_in_sphere(const Group& group, std::int64_t n, const std::function<void(const GroupElement&)>& fn) {
  if (n < 0) throw ValidationError("sphere radius must be >= 0");
  if (!group.is_free()) {
    fn(GroupElement(n));
    if (n != 0) fn(GroupElement(-n));
    return;
  }
  Word prefix(group.rank);
  extend(prefix, 0, 0, n, group.rank, fn);
}

std::vector<GroupElement> sphere(const Group& group, std::int64_t n) {
  std::vector<GroupElement> out;
  for_each_in_sphere(group, n, [&out](const GroupElement& g) { out.push_back(g); });
  return out;
}

std::vector<GroupElement> ball(const Group& group, std::int64_t n) {
  std::vector<GroupElement> out;
  for (std::int64_t r = 0; r <= n; ++r) {
    for_each_in_sphere(group, r, [&out](const GroupElement& g) { out.push_back(g); });
  }
  return out;
}

std::int64_t sphere_size(const Group& group, std::int64_t n) {
  if (n == 0) return 1;
  if (!group.is_free()) return 2;
  std::int64_t r = group.rank;
  std::int64_t size = 2 * r;
  for (std::int64_t i = 1; i < n; ++i) size *= (2 * r - 1);
  return size;
}

WClass w_class(const GroupElement& g) {
  const Word& w = rank_two_word(g, "w_class");
  if (w.is_identity()) return WClass::W;
  const Syllable& last = w.syllables().back();
  if (last.exp > 0) return last.gen == 1 ? WClass::Wa : WClass::Wb;
  return WClass::W;
}

bool w_last_positive(const GroupElement& g, int gen) {
  if (!g.is_word()) throw ValidationError("w_last_positive needs a free-group word");
  const Word& w = g.word();
  if (w.is_identity()) return false;
  const Syllable& last = w.syllables().back();
  return last.gen == gen && last.exp > 0;
}

EClass e_class(const GroupElement& g) {
  const Word& w = rank_two_word(g, "e_class");
  if (w.is_identity()) return EClass::Identity;
  return w.syllables().back().gen == 1 ? EClass::Ea : EClass::Eb;
}

std::int64_t pi_a(const GroupElement& g) {
  if (e_class(g) != EClass::Ea) throw ValidationError("pi_a applied outside E_a");
  return g.word().syllables().back().exp;
}

std::int64_t pi_b(const GroupElement& g) {
  if (e_class(g) != EClass::Eb) throw ValidationError("pi_b applied outside E_b");
  return g.word().syllables().back().exp;
}

namespace {

std::string generator_name(int gen) {
  if (gen >= 1 && gen <= 4) return std::string(1, static_cast<char>('a' + gen - 1));
  return "x" + std::to_string(gen);
}

}  // namespace

std::string format_element(const GroupElement& g) {
  if (g.is_integer()) return std::to_string(g.integer());
  const Word& w = g.word();
  if (w.is_identity()) return "e";
  std::ostringstream out;
  bool first = true;
  for (const Syllable& s : w.syllables()) {
    if (!first) out << ' ';
    first = false;
    out << generator_name(s.gen);
    if (s.exp != 1) out << '^' << s.exp;
  }
  return out.str();
}

GroupElement parse_element(const Group& group, std::string_view text) {
  std::string s(text);
  if (!group.is_free()) {
    try {
      std::size_t pos = 0;
      long long k = std::stoll(s, &pos);
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos != s.size()) throw ValidationError("trailing characters in integer '" + s + "'");
      return GroupElement(static_cast<std::int64_t>(k));
    } catch (const std::logic_error&) {
      throw ValidationError("malformed integer element '" + s + "'");
    }
  }

  Word w(group.rank);
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip_space();
  if (s.substr(i) == "e" || s.substr(i) == "1" || i == s.size()) return GroupElement(w);
  while (i < s.size()) {
    int gen = 0;
    char c = s[i];
    if (c >= 'a' && c <= 'd') {
      gen = c - 'a' + 1;
      ++i;
    } else if (c == 'x') {
      ++i;
      std::size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (start == i) throw ValidationError("expected generator index after 'x' in '" + s + "'");
      gen = std::stoi(s.substr(start, i - start));
    } else {
      throw ValidationError("unexpected character '" + std::string(1, c) + "' in word '" + s + "'");
    }
    std::int64_t exp = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      std::size_t start = i;
      if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (start == i) throw ValidationError("missing exponent in '" + s + "'");
      try {
        exp = std::stoll(s.substr(start, i - start));
      } catch (const std::logic_error&) {
        throw ValidationError("malformed exponent in '" + s + "'");
      }
    }
    w.push_back(gen, exp);
    skip_space();
  }
  return GroupElement(w);
}

std::string_view to_string(WClass c) {
  switch (c) {
    case WClass::Wa: return "W_a";
    case WClass::Wb: return "W_b";
    case WClass::W: return "W";
  }
  return "?";
}

std::string_view to_string(EClass c) {
  switch (c) {
    case EClass::Identity: return "e";
    case EClass::Ea: return "E_a";
    case EClass::Eb: return "E_b";
  }
  return "?";
}

}  // namespace bernlab
