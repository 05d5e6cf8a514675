#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "allostery/actions.hpp"
#include "allostery/rational.hpp"
#include "allostery/words.hpp"

namespace allostery {

// The orientation subgroup Gamma of Gamma' = <x_1..x_g | x_1^2 ... x_g^2>,
// presented as Gamma_{A,B} with |A| = floor((g-1)/2) and |A| + |B| = g - 1,
// together with the index-two transversal {1, sigma}, sigma = x_1.
//
// Actions are right actions, so for a Gamma'-generator y and a sheet e the
// induced action uses h(y, e) = t_e y t_{e+parity(y)}^-1 with t_0 = 1,
// t_1 = sigma, written as a word over Gamma.
struct EmbeddingData {
  int genus = 0;  // g' of the non-orientable group
  Presentation nonorientable = Presentation::nonorientable(3);
  Presentation orientable = Presentation::orientable(1, 1);
  Letter sigma = 1;
  std::vector<int> parity;  // per Gamma'-generator
  // Word over Gamma' for each Gamma-generator, in generator order.
  std::vector<Word> images;
  // conjugation[y][e] = h(y, e) as a word over Gamma.
  std::vector<std::array<Word, 2>> conjugation;

  nlohmann::json to_json() const;
  static EmbeddingData from_json(const nlohmann::json& j);
};

EmbeddingData orientation_double_cover(int genus);

struct SheetWord {
  Word word;  // over Gamma
  int end_sheet;
};

// Reidemeister-Schreier rewrite of a Gamma'-word read from `sheet`: the
// returned word equals t_sheet w t_end^-1 in Gamma'.
SheetWord rewrite_to_subgroup(const EmbeddingData& ed, const Word& w, int sheet);

// phi(s) = sigma * image(s) * sigma^-1 as a word over Gamma, for each
// Gamma_A generator s.
std::vector<Word> conjugated_gamma_a_words(const EmbeddingData& ed);

struct EmbeddingReport {
  bool ok = true;
  std::string check;  // "a", "b" or "c"
  std::string detail;
};

// (a) parity of every image word is even and every parity is 1;
// (b) the Gamma relator after substituting images acts trivially in a
//     battery of finite quotients of Gamma', and image words rewrite back to
//     their generators (Dehn in Gamma);
// (c) induce() satisfies the Gamma' relator and restricts correctly on three
//     sample Gamma-actions.
EmbeddingReport verify_embedding(const EmbeddingData& ed);

// Gamma'-action on degree * 2 points; point (x, e) is x + e * degree.
// Throws RelatorFailure when the result is not a Gamma'-action or does not
// restrict to `act` on sheet 0.
PointedAction induce(const PointedAction& act, const EmbeddingData& ed);

}  // namespace allostery
