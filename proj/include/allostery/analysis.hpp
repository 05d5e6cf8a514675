#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "allostery/construction.hpp"
#include "allostery/induction.hpp"

namespace allostery {

// |Fix(w)| / degree at the level, exact. Level 0 is the one-point action.
Rational fix_proportion(const Chain& chain, const Word& w, int level);

// Proportion of points fixed by every word of `fixed` and by no word of
// `moved`. Uses the materialized level when present, otherwise the
// component counts (the level is the full product of its components).
Rational cylinder_measure(const Chain& chain, std::span<const Word> fixed,
                          std::span<const Word> moved, int level);
// The two routes separately; the materialized one throws DomainError when
// the level is stored implicitly.
Rational cylinder_measure_components(const Chain& chain, std::span<const Word> fixed,
                                     std::span<const Word> moved, int level);
Rational cylinder_measure_materialized(const Chain& chain, std::span<const Word> fixed,
                                       std::span<const Word> moved, int level);

struct ProportionSeries {
  std::vector<Word> fixed;
  std::vector<Word> moved;
  std::vector<int> levels;
  std::vector<Rational> values;
  bool monotone = true;  // non-increasing
};

ProportionSeries cylinder_series(const Chain& chain, std::span<const Word> fixed,
                                 std::span<const Word> moved, std::span<const int> levels);

struct TrivialityCertificate {
  int length_bound = 0;
  int max_level = 0;
  std::vector<std::pair<Word, int>> separated;  // word, first level moving the basepoint
  std::vector<Word> failures;

  nlohmann::json to_json(const Presentation& pres) const;
};

TrivialityCertificate urs_certificate(const Chain& chain, int length_bound, int max_level);

struct CompareReport {
  int level = 0;
  Rational s, t;
  Rational measure_s, measure_t;
  Rational gap;
  Rational tail_s, tail_t;
  bool tails_small = false;  // both tails < |s - t| / 4
  bool distinct = false;     // tails small and gap > |s - t| / 2

  nlohmann::json to_json() const;
};

// Gamma_A-cylinder measures of both chains at `level` and the evidence rule.
CompareReport compare_chains(const Chain& chain_s, const Chain& chain_t, int level);

// Freely reduced words of length <= L (including the empty word) fixing the
// basepoint at the level.
std::vector<Word> stabilizer_ball(const Chain& chain, int level, int length_bound);

struct InducedMeasure {
  Rational value;  // (t_n + c_n) / 2
  Rational t_n;
  Rational c_n;
  // Count on the materialized induced action, when the level is materialized.
  std::optional<Rational> direct;
};

InducedMeasure induced_gamma_a_measure(const Chain& chain, const EmbeddingData& ed, int level);

}  // namespace allostery
