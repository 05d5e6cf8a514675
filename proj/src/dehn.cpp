#include <algorithm>

#include "allostery/errors.hpp"
#include "allostery/induction.hpp"
#include "allostery/words.hpp"

namespace allostery {

DehnReducer::DehnReducer(const Word& relator) : length_(relator.size()) {
  if (relator.empty()) {
    throw PresentationUnsupported("Dehn reduction needs a nonempty relator");
  }
  const auto& r = relator.letters();
  if (r.front() == -r.back()) {
    throw PresentationUnsupported("Dehn reduction needs a cyclically reduced relator");
  }
  auto add_rotations = [this](const std::vector<Letter>& word) {
    for (std::size_t s = 0; s < word.size(); ++s) {
      std::vector<Letter> rot(word.begin() + static_cast<long>(s), word.end());
      rot.insert(rot.end(), word.begin(), word.begin() + static_cast<long>(s));
      rotations_.push_back(std::move(rot));
    }
  };
  add_rotations(r);
  add_rotations(relator.inverse().letters());
}

Word DehnReducer::reduce(const Word& w) const {
  std::vector<Letter> cur = w.letters();
  const std::size_t n = length_;
  for (;;) {
    bool replaced = false;
    for (std::size_t i = 0; i < cur.size() && !replaced; ++i) {
      std::size_t best_k = 0;
      const std::vector<Letter>* best = nullptr;
      for (const auto& rot : rotations_) {
        std::size_t k = 0;
        while (k < n && i + k < cur.size() && cur[i + k] == rot[k]) {
          ++k;
        }
        if (2 * k > n && k > best_k) {
          best_k = k;
          best = &rot;
        }
      }
      if (best == nullptr) {
        continue;
      }
      // rot = u v with u = cur[i, i+k); u v = 1 so u = v^-1.
      std::vector<Letter> next(cur.begin(), cur.begin() + static_cast<long>(i));
      for (std::size_t j = n; j-- > best_k;) {
        next.push_back(-(*best)[j]);
      }
      next.insert(next.end(), cur.begin() + static_cast<long>(i + best_k), cur.end());
      cur = free_reduce(next).letters();
      replaced = true;
    }
    if (!replaced) {
      break;
    }
  }
  return Word(cur);
}

DehnResult dehn_is_trivial(const Presentation& pres, const Word& w) {
  for (Letter l : w) {
    if (generator_of(l) >= pres.num_generators()) {
      throw ForeignGenerators("word uses letters outside the presentation");
    }
  }
  if (pres.orientable()) {
    // Relator length 4g >= 8 with pieces of length 1: C'(1/6).
    Word reduced = DehnReducer(pres.relator()).reduce(w);
    return {reduced.empty(), reduced};
  }
  if (pres.genus() >= 4) {
    Word reduced = DehnReducer(pres.relator()).reduce(w);
    return {reduced.empty(), reduced};
  }
  if (pres.genus() == 3) {
    // Odd words leave the orientation subgroup, hence are nontrivial.
    if (w.size() % 2 == 1) {
      return {false, w};
    }
    static const EmbeddingData embedding = orientation_double_cover(3);
    auto rewritten = rewrite_to_subgroup(embedding, w, 0);
    Word reduced = DehnReducer(embedding.orientable.relator()).reduce(rewritten.word);
    if (reduced.empty()) {
      return {true, Word{}};
    }
    return {false, w};
  }
  throw PresentationUnsupported("no word-problem route for this presentation");
}

}  // namespace allostery
