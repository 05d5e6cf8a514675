#include "allostery/words.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "allostery/errors.hpp"
#include "allostery/rational.hpp"

namespace allostery {

////////////////////////////////////////////////////////////////////////
// Word
////////////////////////////////////////////////////////////////////////

Word free_reduce(std::span<const Letter> letters) {
  Word result;
  auto& out = result.letters_;
  out.reserve(letters.size());
  for (Letter l : letters) {
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return result;
}

Word::Word(std::span<const Letter> letters) { *this = free_reduce(letters); }

Word::Word(std::initializer_list<Letter> letters)
    : Word(std::span<const Letter>(letters.begin(), letters.size())) {}

Word Word::inverse() const {
  Word result;
  result.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    result.letters_.push_back(-*it);
  }
  return result;
}

Word Word::power(int exponent) const {
  Word base = exponent < 0 ? inverse() : *this;
  Word result;
  for (int i = 0; i < std::abs(exponent); ++i) {
    result = result * base;
  }
  return result;
}

Word Word::conjugated_by(const Word& g) const { return g * *this * g.inverse(); }

Word operator*(const Word& u, const Word& v) {
  std::vector<Letter> joined;
  joined.reserve(u.size() + v.size());
  joined.insert(joined.end(), u.begin(), u.end());
  joined.insert(joined.end(), v.begin(), v.end());
  return free_reduce(joined);
}

std::strong_ordering operator<=>(const Word& u, const Word& v) {
  if (u.size() != v.size()) {
    return u.size() <=> v.size();
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    int a = letter_ordinal(u[i]);
    int b = letter_ordinal(v[i]);
    if (a != b) {
      return a <=> b;
    }
  }
  return std::strong_ordering::equal;
}

Word commutator(const Word& x, const Word& y) { return x * y * x.inverse() * y.inverse(); }

////////////////////////////////////////////////////////////////////////
// Presentation
////////////////////////////////////////////////////////////////////////

Presentation Presentation::orientable(int size_a, int size_b) {
  if (size_a < 1 || size_b < 1) {
    throw DomainError("orientable presentation needs |A| >= 1 and |B| >= 1");
  }
  if (size_a + size_b < 2) {
    throw DomainError("genus must be at least 2 (non-amenable surface group)");
  }
  Presentation p;
  p.orientable_ = true;
  p.size_a_ = size_a;
  p.size_b_ = size_b;
  p.genus_ = size_a + size_b;
  for (int i = 1; i <= size_a; ++i) {
    p.generators_.push_back({GeneratorKind::a, i});
    p.names_.push_back("a" + std::to_string(i));
    p.generators_.push_back({GeneratorKind::alpha, i});
    p.names_.push_back("al" + std::to_string(i));
  }
  for (int j = 1; j <= size_b; ++j) {
    p.generators_.push_back({GeneratorKind::b, j});
    p.names_.push_back("b" + std::to_string(j));
    p.generators_.push_back({GeneratorKind::beta, j});
    p.names_.push_back("be" + std::to_string(j));
  }
  Word left;
  for (int i = 1; i <= size_a; ++i) {
    left = left * commutator(Word{p.letter(GeneratorKind::a, i)},
                             Word{p.letter(GeneratorKind::alpha, i)});
  }
  Word right;
  for (int j = 1; j <= size_b; ++j) {
    right = right * commutator(Word{p.letter(GeneratorKind::b, j)},
                               Word{p.letter(GeneratorKind::beta, j)});
  }
  p.relator_ = left * right.inverse();
  return p;
}

Presentation Presentation::nonorientable(int genus) {
  if (genus < 3) {
    throw DomainError("non-orientable genus must be at least 3 (non-amenable surface group)");
  }
  Presentation p;
  p.orientable_ = false;
  p.genus_ = genus;
  std::vector<Letter> rel;
  for (int i = 1; i <= genus; ++i) {
    p.generators_.push_back({GeneratorKind::x, i});
    p.names_.push_back("x" + std::to_string(i));
    rel.push_back(positive_letter(i - 1));
    rel.push_back(positive_letter(i - 1));
  }
  p.relator_ = Word(rel);
  return p;
}

std::optional<int> Presentation::find_generator(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) {
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

Letter Presentation::letter(GeneratorKind kind, int index) const {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (generators_[i].kind == kind && generators_[i].index == index) {
      return positive_letter(static_cast<int>(i));
    }
  }
  throw DomainError("generator index out of range for this presentation");
}

Letter Presentation::distinguished() const {
  if (!orientable_) {
    throw PresentationUnsupported("b_{j0} is only defined for orientable presentations");
  }
  return letter(GeneratorKind::b, 1);
}

std::vector<Letter> Presentation::gamma_a_generators() const {
  std::vector<Letter> out;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    auto k = generators_[i].kind;
    if (k == GeneratorKind::a || k == GeneratorKind::alpha) {
      out.push_back(positive_letter(static_cast<int>(i)));
    }
  }
  return out;
}

std::vector<Letter> Presentation::gamma_b_generators() const {
  std::vector<Letter> out;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    auto k = generators_[i].kind;
    if (k == GeneratorKind::b || k == GeneratorKind::beta) {
      out.push_back(positive_letter(static_cast<int>(i)));
    }
  }
  return out;
}

bool Presentation::is_gamma_b_letter(Letter l) const {
  auto k = generators_[static_cast<std::size_t>(generator_of(l))].kind;
  return k == GeneratorKind::b || k == GeneratorKind::beta;
}

Word Presentation::parse(std::string_view text) const {
  std::vector<Letter> letters;
  std::size_t pos = 0;
  auto is_sep = [](char c) { return std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '.'; };
  while (pos < text.size()) {
    while (pos < text.size() && is_sep(text[pos])) {
      ++pos;
    }
    if (pos >= text.size()) {
      break;
    }
    std::size_t end = pos;
    while (end < text.size() && !is_sep(text[end])) {
      ++end;
    }
    std::string_view token = text.substr(pos, end - pos);
    pos = end;
    if (token == "1" || token == "e") {
      continue;
    }
    std::string_view name = token;
    int exponent = 1;
    if (auto caret = token.find('^'); caret != std::string_view::npos) {
      name = token.substr(0, caret);
      auto digits = token.substr(caret + 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), exponent);
      if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw ParseError("bad exponent in word token '" + std::string(token) + "'");
      }
    }
    auto gen = find_generator(name);
    if (!gen) {
      throw ForeignGenerators("unknown generator '" + std::string(name) + "'");
    }
    Letter l = exponent < 0 ? -positive_letter(*gen) : positive_letter(*gen);
    for (int i = 0; i < std::abs(exponent); ++i) {
      letters.push_back(l);
    }
  }
  return free_reduce(letters);
}

std::string Presentation::format(Letter l) const {
  auto g = generator_of(l);
  if (g < 0 || g >= num_generators()) {
    throw ForeignGenerators("letter outside presentation alphabet");
  }
  std::string s = names_[static_cast<std::size_t>(g)];
  if (l < 0) {
    s += "^-1";
  }
  return s;
}

std::string Presentation::format(const Word& w) const {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) {
      out += ' ';
    }
    out += format(w[i]);
  }
  return out;
}

nlohmann::json Presentation::to_json() const {
  if (orientable_) {
    return {{"type", "orientable"}, {"sizeA", size_a_}, {"sizeB", size_b_}};
  }
  return {{"type", "nonorientable"}, {"genus", genus_}};
}

Presentation Presentation::from_json(const nlohmann::json& j) {
  try {
    auto type = j.at("type").get<std::string>();
    if (type == "orientable") {
      return orientable(j.at("sizeA").get<int>(), j.at("sizeB").get<int>());
    }
    if (type == "nonorientable") {
      return nonorientable(j.at("genus").get<int>());
    }
    throw ParseError("unknown presentation type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("presentation JSON: ") + e.what());
  }
}

////////////////////////////////////////////////////////////////////////
// Homomorphisms
////////////////////////////////////////////////////////////////////////

std::vector<long long> exponent_sums(const Presentation& pres, const Word& w) {
  std::vector<long long> sums(static_cast<std::size_t>(pres.num_generators()), 0);
  for (Letter l : w) {
    auto g = generator_of(l);
    if (g >= pres.num_generators()) {
      throw ForeignGenerators("letter outside presentation alphabet");
    }
    sums[static_cast<std::size_t>(g)] += l > 0 ? 1 : -1;
  }
  return sums;
}

long long phi(const Presentation& pres, const Word& w) {
  Letter b = pres.distinguished();
  long long sum = 0;
  for (Letter l : w) {
    if (l == b) {
      ++sum;
    } else if (l == -b) {
      --sum;
    }
  }
  return sum;
}

////////////////////////////////////////////////////////////////////////
// Erasing morphisms
////////////////////////////////////////////////////////////////////////

namespace {

std::vector<int> checked_keep(std::span<const int> keep, int size, const char* side) {
  std::set<int> s(keep.begin(), keep.end());
  if (s.empty()) {
    throw EmptyTarget(std::string("erase: kept subset of ") + side + " is empty");
  }
  for (int i : s) {
    if (i < 1 || i > size) {
      throw DomainError(std::string("erase: index out of range in ") + side);
    }
  }
  return {s.begin(), s.end()};
}

}  // namespace

Presentation erased_presentation(const Presentation& pres, std::span<const int> keep_a,
                                 std::span<const int> keep_b) {
  if (!pres.orientable()) {
    throw PresentationUnsupported("erase applies to orientable presentations");
  }
  auto ka = checked_keep(keep_a, pres.size_a(), "A");
  auto kb = checked_keep(keep_b, pres.size_b(), "B");
  return Presentation::orientable(static_cast<int>(ka.size()), static_cast<int>(kb.size()));
}

ErasedWord erase(const Presentation& pres, std::span<const int> keep_a,
                 std::span<const int> keep_b, const Word& w) {
  auto target = erased_presentation(pres, keep_a, keep_b);
  auto ka = checked_keep(keep_a, pres.size_a(), "A");
  auto kb = checked_keep(keep_b, pres.size_b(), "B");
  auto renumber = [](const std::vector<int>& kept, int index) -> int {
    auto it = std::lower_bound(kept.begin(), kept.end(), index);
    if (it == kept.end() || *it != index) {
      return 0;
    }
    return static_cast<int>(it - kept.begin()) + 1;
  };
  std::vector<Letter> out;
  for (Letter l : w) {
    const auto& gen = pres.generator(generator_of(l));
    bool a_side = gen.kind == GeneratorKind::a || gen.kind == GeneratorKind::alpha;
    int idx = renumber(a_side ? ka : kb, gen.index);
    if (idx == 0) {
      continue;
    }
    Letter image = target.letter(gen.kind, idx);
    out.push_back(l > 0 ? image : -image);
  }
  return {target, free_reduce(out)};
}

bool boundary_closure_member(const Presentation& pres, const Word& w) {
  if (!pres.orientable()) {
    throw PresentationUnsupported("boundary closure is defined for orientable presentations");
  }
  for (Letter l : w) {
    if (!pres.is_gamma_b_letter(l)) {
      throw ForeignGenerators("boundary_closure_member expects a word over b/beta generators");
    }
  }
  if (pres.size_b() == 1) {
    // Gamma_B / <<[b, beta]>> = Z^2: decided by exponent sums.
    auto sums = exponent_sums(pres, w);
    for (Letter g : pres.gamma_b_generators()) {
      if (sums[static_cast<std::size_t>(generator_of(g))] != 0) {
        return false;
      }
    }
    return true;
  }
  Word rel;
  for (int j = 1; j <= pres.size_b(); ++j) {
    rel = rel * commutator(Word{pres.letter(GeneratorKind::b, j)},
                           Word{pres.letter(GeneratorKind::beta, j)});
  }
  return DehnReducer(rel).reduce(w).empty();
}

////////////////////////////////////////////////////////////////////////
// Enumeration
////////////////////////////////////////////////////////////////////////

WordEnumerator::WordEnumerator(const Presentation& pres, int max_length, bool nontrivial_only,
                               std::vector<int> generators)
    : pres_(pres), max_length_(max_length), nontrivial_only_(nontrivial_only) {
  if (generators.empty()) {
    for (int g = 0; g < pres.num_generators(); ++g) {
      generators.push_back(g);
    }
  }
  std::sort(generators.begin(), generators.end());
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
  for (int g : generators) {
    alphabet_.push_back(2 * g);
    alphabet_.push_back(2 * g + 1);
  }
  if (max_length_ < 1 || alphabet_.empty()) {
    done_ = true;
  }
}

bool WordEnumerator::fill_from(std::size_t position) {
  for (std::size_t i = position; i < current_.size(); ++i) {
    std::size_t idx = 0;
    if (i > 0) {
      int prev = alphabet_[static_cast<std::size_t>(current_[i - 1])];
      while (idx < alphabet_.size() && alphabet_[idx] == (prev ^ 1)) {
        ++idx;
      }
    }
    if (idx >= alphabet_.size()) {
      return false;
    }
    current_[i] = static_cast<int>(idx);
  }
  return true;
}

bool WordEnumerator::advance() {
  if (!started_) {
    started_ = true;
    current_.assign(1, 0);
    return fill_from(0);
  }
  for (std::size_t i = current_.size(); i-- > 0;) {
    int prev = i > 0 ? alphabet_[static_cast<std::size_t>(current_[i - 1])] : -1;
    for (std::size_t idx = static_cast<std::size_t>(current_[i]) + 1; idx < alphabet_.size(); ++idx) {
      if (i > 0 && alphabet_[idx] == (prev ^ 1)) {
        continue;
      }
      current_[i] = static_cast<int>(idx);
      if (fill_from(i + 1)) {
        return true;
      }
    }
  }
  if (static_cast<int>(current_.size()) >= max_length_) {
    return false;
  }
  current_.assign(current_.size() + 1, 0);
  return fill_from(0);
}

std::optional<Word> WordEnumerator::next() {
  while (!done_) {
    if (!advance()) {
      done_ = true;
      break;
    }
    std::vector<Letter> letters;
    letters.reserve(current_.size());
    for (int idx : current_) {
      letters.push_back(letter_from_ordinal(alphabet_[static_cast<std::size_t>(idx)]));
    }
    Word w(letters);
    if (nontrivial_only_ && dehn_is_trivial(pres_, w).trivial) {
      continue;
    }
    return w;
  }
  return std::nullopt;
}

std::vector<Word> enumerate_nontrivial(const Presentation& pres, int max_length) {
  std::vector<Word> out;
  WordEnumerator en(pres, max_length, true);
  while (auto w = en.next()) {
    out.push_back(std::move(*w));
  }
  return out;
}

std::vector<Word> enumerate_ball(const Presentation& pres, int max_length) {
  std::vector<Word> out{Word{}};
  WordEnumerator en(pres, max_length, false);
  while (auto w = en.next()) {
    out.push_back(std::move(*w));
  }
  return out;
}

////////////////////////////////////////////////////////////////////////
// Rationals and small number theory
////////////////////////////////////////////////////////////////////////

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      s += c;
    }
  }
  auto valid_int = [](std::string_view part) {
    if (part.empty()) {
      return false;
    }
    std::size_t start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (start == part.size()) {
      return false;
    }
    return std::all_of(part.begin() + static_cast<long>(start), part.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  };
  auto slash = s.find('/');
  std::string_view num = std::string_view(s).substr(0, slash);
  std::string_view den = slash == std::string::npos ? std::string_view("1")
                                                    : std::string_view(s).substr(slash + 1);
  if (!valid_int(num) || !valid_int(den)) {
    throw ParseError("not a rational number: '" + std::string(text) + "'");
  }
  BigInt d{std::string(den)};
  if (d == 0) {
    throw ParseError("zero denominator in '" + std::string(text) + "'");
  }
  return Rational(BigInt{std::string(num)}, d);
}

std::string to_string(const Rational& q) { return q.str(); }

int power_exponent(const BigInt& n, unsigned p) {
  if (n < 1) {
    return -1;
  }
  BigInt m = n;
  int k = 0;
  while (m % p == 0) {
    m /= p;
    ++k;
  }
  return m == 1 ? k : -1;
}

BigInt ipow(unsigned base, unsigned exponent) {
  BigInt r = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    r *= base;
  }
  return r;
}

bool is_prime(unsigned n) {
  if (n < 2) {
    return false;
  }
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      return false;
    }
  }
  return true;
}

}  // namespace allostery
