#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace allostery {

// A letter is +(i+1) for the i-th positive generator of a presentation and
// -(i+1) for its inverse.
using Letter = std::int32_t;

inline constexpr Letter inverse(Letter l) { return -l; }
inline constexpr int generator_of(Letter l) { return (l > 0 ? l : -l) - 1; }
inline constexpr Letter positive_letter(int generator) { return generator + 1; }

// Position of a letter in the length-lexicographic alphabet
// g0, g0^-1, g1, g1^-1, ...
inline constexpr int letter_ordinal(Letter l) { return 2 * generator_of(l) + (l < 0 ? 1 : 0); }
inline constexpr Letter letter_from_ordinal(int ord) {
  return ord % 2 == 0 ? positive_letter(ord / 2) : -positive_letter(ord / 2);
}

class Word;
// The unique freely reduced form of an arbitrary letter sequence.
Word free_reduce(std::span<const Letter> letters);

// Freely reduced word. Every constructor reduces, so the invariant always holds.
class Word {
 public:
  Word() = default;
  explicit Word(std::span<const Letter> letters);
  Word(std::initializer_list<Letter> letters);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  Word inverse() const;
  Word power(int exponent) const;
  Word conjugated_by(const Word& g) const;  // g * this * g^-1

  friend Word operator*(const Word& u, const Word& v);
  friend bool operator==(const Word&, const Word&) = default;
  // Length-lexicographic order using letter_ordinal.
  friend std::strong_ordering operator<=>(const Word& u, const Word& v);
  friend Word free_reduce(std::span<const Letter> letters);

 private:
  std::vector<Letter> letters_;
};

// Commutator [x, y] = x y x^-1 y^-1.
Word commutator(const Word& x, const Word& y);

enum class GeneratorKind { a, alpha, b, beta, x };

struct Generator {
  GeneratorKind kind;
  int index;  // 1-based within A, B or 1..genus
  friend bool operator==(const Generator&, const Generator&) = default;
};

// Either the amalgam presentation Gamma_{A,B} = <a_i, alpha_i, b_j, beta_j |
// prod [a_i, alpha_i] = prod [b_j, beta_j]> with A = {1..sizeA},
// B = {1..sizeB}, or the non-orientable <x_1..x_g | x_1^2 ... x_g^2>.
//
// Orientable generator order: a1, al1, a2, al2, ..., b1, be1, b2, be2, ...
class Presentation {
 public:
  static Presentation orientable(int size_a, int size_b);
  static Presentation nonorientable(int genus);

  bool orientable() const { return orientable_; }
  int genus() const { return genus_; }
  int size_a() const { return size_a_; }
  int size_b() const { return size_b_; }
  int num_generators() const { return static_cast<int>(generators_.size()); }
  const Generator& generator(int i) const { return generators_[static_cast<std::size_t>(i)]; }
  const std::string& generator_name(int i) const { return names_[static_cast<std::size_t>(i)]; }
  std::optional<int> find_generator(std::string_view name) const;

  Letter letter(GeneratorKind kind, int index) const;
  const Word& relator() const { return relator_; }

  // b_{j0}: the b-generator with the smallest index of B.
  Letter distinguished() const;
  // a_i, alpha_i for all i in A, as positive letters.
  std::vector<Letter> gamma_a_generators() const;
  std::vector<Letter> gamma_b_generators() const;
  bool is_gamma_b_letter(Letter l) const;

  Word parse(std::string_view text) const;
  std::string format(const Word& w) const;
  std::string format(Letter l) const;

  nlohmann::json to_json() const;
  static Presentation from_json(const nlohmann::json& j);

  friend bool operator==(const Presentation& p, const Presentation& q) {
    return p.orientable_ == q.orientable_ && p.size_a_ == q.size_a_ &&
           p.size_b_ == q.size_b_ && p.genus_ == q.genus_;
  }

 private:
  Presentation() = default;
  bool orientable_ = true;
  int size_a_ = 0;
  int size_b_ = 0;
  int genus_ = 0;
  std::vector<Generator> generators_;
  std::vector<std::string> names_;
  Word relator_;
};

// Signed exponent sum of b_{j0} in w (the homomorphism onto Z killing every
// other generator).
long long phi(const Presentation& pres, const Word& w);

// Exponent sum of every generator.
std::vector<long long> exponent_sums(const Presentation& pres, const Word& w);

struct DehnResult {
  bool trivial;
  Word witness;  // fully Dehn-reduced form; empty iff trivial
};

// Dehn's algorithm for a single cyclically reduced relator satisfying C'(1/6).
// Subwords longer than half of a cyclic rotation of the relator (or its
// inverse) are replaced by the shorter complement; leftmost position first,
// longest match at that position, then first rotation in scan order.
class DehnReducer {
 public:
  explicit DehnReducer(const Word& relator);
  Word reduce(const Word& w) const;
  std::size_t relator_length() const { return length_; }

 private:
  std::size_t length_;
  std::vector<std::vector<Letter>> rotations_;  // rotations of r then r^-1
};

// Word problem. Orientable genus >= 2 and non-orientable genus >= 4 use Dehn
// directly; non-orientable genus 3 is rewritten into the orientation
// subgroup and decided there.
DehnResult dehn_is_trivial(const Presentation& pres, const Word& w);

struct ErasedWord {
  Presentation target;
  Word word;
};

// Generators a_i, alpha_i (i not in keep_a) and b_j, beta_j (j not in keep_b)
// are sent to 1; kept generators are renumbered consecutively in increasing
// order. Indices are 1-based.
ErasedWord erase(const Presentation& pres, std::span<const int> keep_a,
                 std::span<const int> keep_b, const Word& w);
Presentation erased_presentation(const Presentation& pres, std::span<const int> keep_a,
                                 std::span<const int> keep_b);

// Membership in the normal closure of prod [b_j, beta_j] inside the free
// group Gamma_B.
bool boundary_closure_member(const Presentation& pres, const Word& w);

// Length-lexicographic stream of freely reduced words of length 1..max_length.
// With `nontrivial_only`, Dehn-trivial words are skipped. With a restricted
// alphabet, only the listed generators (and their inverses) are used.
class WordEnumerator {
 public:
  WordEnumerator(const Presentation& pres, int max_length, bool nontrivial_only = true,
                 std::vector<int> generators = {});
  std::optional<Word> next();
  int max_length() const { return max_length_; }

 private:
  bool advance();
  bool fill_from(std::size_t position);

  Presentation pres_;
  int max_length_;
  bool nontrivial_only_;
  std::vector<int> alphabet_;  // allowed letter ordinals, increasing
  std::vector<int> current_;   // indices into alphabet_
  bool started_ = false;
  bool done_ = false;
};

std::vector<Word> enumerate_nontrivial(const Presentation& pres, int max_length);

// All freely reduced words of length <= max_length, including the empty word,
// in length-lexicographic order.
std::vector<Word> enumerate_ball(const Presentation& pres, int max_length);

}  // namespace allostery
