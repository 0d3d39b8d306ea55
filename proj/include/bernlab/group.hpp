#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bernlab {

// The two group kinds the library knows about: the integers and free groups F_n.
struct Group {
  enum class Kind { Integers, Free };
  Kind kind = Kind::Integers;
  int rank = 1;

  static Group integers() { return {Kind::Integers, 1}; }
  static Group free(int rank);

  bool is_free() const { return kind == Kind::Free; }
  bool operator==(const Group&) const = default;
};

// A raw letter a_gen^sign, sign = +1 or -1.
struct Letter {
  int gen;
  int sign;
};

// A maximal run gen^exp of a reduced word; exp != 0.
struct Syllable {
  int gen;
  std::int64_t exp;
  auto operator<=>(const Syllable&) const = default;
};

// Freely reduced word, stored run-length encoded by syllable. Adjacent
// syllables always carry different generators.
class Word {
 public:
  Word() = default;
  explicit Word(int rank) : rank_(rank) {}

  // Builds from syllables, merging and cancelling as needed.
  static Word from_syllables(int rank, std::span<const Syllable> syllables);

  int rank() const { return rank_; }
  std::span<const Syllable> syllables() const { return syllables_; }
  std::int64_t length() const { return length_; }
  bool is_identity() const { return syllables_.empty(); }

  // Appends gen^exp on the right, reducing against the current last syllable.
  void push_back(int gen, std::int64_t exp);

  Word inverse() const;

  auto operator<=>(const Word& other) const {
    if (auto c = rank_ <=> other.rank_; c != 0) return c;
    return syllables_ <=> other.syllables_;
  }
  bool operator==(const Word& other) const = default;

 private:
  int rank_ = 2;
  std::vector<Syllable> syllables_;
  std::int64_t length_ = 0;
};

// An element of Z or of F_n. The variant records which group it lives in.
class GroupElement {
 public:
  GroupElement() : value_(std::int64_t{0}) {}
  GroupElement(std::int64_t k) : value_(k) {}  // NOLINT: integers convert implicitly
  GroupElement(Word w) : value_(std::move(w)) {}  // NOLINT

  static GroupElement identity(const Group& group);

  bool is_integer() const { return std::holds_alternative<std::int64_t>(value_); }
  bool is_word() const { return std::holds_alternative<Word>(value_); }
  std::int64_t integer() const;
  const Word& word() const;
  Group group() const;
  bool is_identity() const;

  auto operator<=>(const GroupElement&) const = default;
  bool operator==(const GroupElement&) const = default;

 private:
  std::variant<std::int64_t, Word> value_;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept;
};

Word reduce(int rank, std::span<const Letter> letters);

GroupElement mul(const GroupElement& g, const GroupElement& h);
GroupElement inv(const GroupElement& g);
std::int64_t word_length(const GroupElement& g);

// The syllable sequence of g in F_2, normalised to start and end with an
// a-exponent: n0, m1, n1, ..., mk, nk (n0 and nk may be zero).
std::vector<std::int64_t> alternating_exponents(const GroupElement& g);

// Number of adjacent syllable exponents (e_j, e_{j+1}) with e_j >= 1 and
// e_{j+1} <= -1. Requires F_2.
std::int64_t descending_sign_changes(const GroupElement& g);

// Elements of word length exactly n (resp. at most n), in deterministic
// lexicographic order (a < a^-1 < b < b^-1 < ...; for Z: n before -n).
void for_each_in_sphere(const Group& group, std::int64_t n, const std::function<void(const GroupElement&)>& fn);
std::vector<GroupElement> sphere(const Group& group, std::int64_t n);
std::vector<GroupElement> ball(const Group& group, std::int64_t n);
std::int64_t sphere_size(const Group& group, std::int64_t n);

enum class WClass { Wa, Wb, W };
enum class EClass { Identity, Ea, Eb };

// Classification by last syllable in F_2: Wa ends with a^{>0}, Wb with b^{>0}.
WClass w_class(const GroupElement& g);
// Whether the last syllable of g is a strictly positive power of `gen`.
bool w_last_positive(const GroupElement& g, int gen);

EClass e_class(const GroupElement& g);
std::int64_t pi_a(const GroupElement& g);
std::int64_t pi_b(const GroupElement& g);

// "a b^-1 a^2", "e" for the identity; generators beyond d are written x5, x6, ...
std::string format_element(const GroupElement& g);
GroupElement parse_element(const Group& group, std::string_view text);

std::string_view to_string(WClass c);
std::string_view to_string(EClass c);

}  // namespace bernlab
