#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "allostery/actions.hpp"
#include "allostery/fp_linear.hpp"

namespace allostery {

// Breadth-first spanning tree of the Schreier graph of an action and the
// numbering of its non-tree edges. Holds a pointer to the action, which must
// outlive it.
struct SchreierData {
  const PointedAction* action = nullptr;
  std::vector<Point> parent;          // kNoPoint at the basepoint
  std::vector<Letter> parent_letter;  // parent[v] . parent_letter[v] = v
  std::vector<std::int32_t> edge_index;  // [v * ngens + g]: edge number, -1 on the tree
  std::uint32_t num_edges = 0;
  int ngens = 0;

  std::int32_t edge(Point v, int generator) const {
    return edge_index[static_cast<std::size_t>(v) * static_cast<std::size_t>(ngens) +
                      static_cast<std::size_t>(generator)];
  }
};

SchreierData schreier_data(const PointedAction& act);

struct EdgeWalk {
  Point end;
  std::vector<std::pair<std::uint32_t, long long>> counts;  // signed, by edge
};

// Walks w from `start`, counting traversed non-tree edges with signs.
EdgeWalk walk_edges(const SchreierData& sd, const Word& w, Point start);

struct SchreierClass {
  Point end;
  FpVector vector;  // length num_edges
};

SchreierClass schreier_class(const SchreierData& sd, const Word& w, Point start, unsigned p);

// A closed walk: `word` read from `point` returns to `point`.
struct Loop {
  Point point;
  Word word;
};

class KillWordNotInSubgroup : public Error {
 public:
  KillWordNotInSubgroup(std::string message, Word word, Point start, Point end)
      : Error(std::move(message)), word_(std::move(word)), start_(start), end_(end) {}
  const Word& word() const { return word_; }
  Point start() const { return start_; }
  Point end() const { return end_; }

 private:
  Word word_;
  Point start_;
  Point end_;
};

// H = F_p^E / span(relator lifts at every point, kill loops). Classes of
// loops map to H through the projection onto free columns.
class HomologyData {
 public:
  HomologyData(const PointedAction& act, unsigned p, std::vector<Loop> kills);

  unsigned p() const { return p_; }
  const SchreierData& schreier() const { return schreier_; }
  const std::vector<Loop>& kills() const { return kills_; }
  const std::vector<SparseRow>& relator_rows() const { return relator_rows_; }
  const std::vector<SparseRow>& kill_rows() const { return kill_rows_; }
  const RowEchelon& echelon() const { return echelon_; }
  std::size_t dimension() const { return echelon_.quotient_dimension(); }
  std::uint32_t num_edges() const { return schreier_.num_edges; }

  // Edge vector of a loop; throws KillWordNotInSubgroup if it does not close.
  FpVector loop_vector(const Loop& loop) const;
  SparseRow loop_row(const Loop& loop) const;
  // Image of the loop in H (coordinates on the free columns).
  FpVector loop_class(const Loop& loop) const;
  SparseRow loop_class_sparse(const Loop& loop) const;

  nlohmann::json to_json() const;

 private:
  unsigned p_;
  SchreierData schreier_;
  std::vector<Loop> kills_;
  std::vector<SparseRow> relator_rows_;
  std::vector<SparseRow> kill_rows_;
  RowEchelon echelon_;
};

HomologyData homology(const PointedAction& act, unsigned p, std::span<const Word> kill_words);
HomologyData homology(const PointedAction& act, unsigned p, std::span<const Loop> kill_loops);

class TargetInvisible : public Error {
 public:
  TargetInvisible(std::string message, Loop target)
      : Error(std::move(message)), target_(std::move(target)) {}
  const Loop& target() const { return target_; }

 private:
  Loop target_;
};

struct SeparationConfig {
  std::size_t rank_cap = 8;
  unsigned retries = 32;
};

// A full-rank map H -> F_p^rank, stored as rank rows of length dim(H), with
// the nonzero target images that certify it.
struct SeparationMap {
  unsigned p = 2;
  std::size_t rank = 0;
  std::size_t dimension = 0;
  std::vector<FpVector> matrix;
  std::uint64_t seed = 0;
  unsigned attempt = 0;
  std::vector<Loop> targets;
  std::vector<FpVector> images;

  FpVector apply(const FpVector& h) const;
  nlohmann::json to_json(const Presentation& pres) const;
};

// Smallest rank m <= rank_cap for which a seeded random full-rank m x dim(H)
// matrix keeps every target class nonzero. Throws TargetInvisible when a
// target dies in H and RankExhausted when no rank within the cap works.
SeparationMap search_separation(const HomologyData& hd, std::span<const Loop> targets,
                                std::uint64_t seed, SeparationConfig config = {});
// Targets read at the basepoint.
SeparationMap search_separation(const HomologyData& hd, std::span<const Word> targets,
                                std::uint64_t seed, SeparationConfig config = {});

// A seeded random full-rank map of the given rank with no targets.
SeparationMap random_separation(const HomologyData& hd, std::size_t rank, std::uint64_t seed);

// Points (v, h) with h in F_p^rank, encoded v * p^rank + sum h_k p^k.
// Generator g sends (v, h) to (v.g, h + sm(proj(edge(v, g)))).
PointedAction cocycle_cover(const PointedAction& act, const HomologyData& hd,
                            const SeparationMap& sm);

// b_{j0} shifts Z/d by +1, every other generator acts trivially.
PointedAction cyclic_cover(const Presentation& pres, Point d);

// Generator i shifts Z/d by shifts[i]. Throws DomainError when the relator
// does not act trivially.
PointedAction abelian_cover(const Presentation& pres, std::span<const long long> shifts,
                            Point d);

}  // namespace allostery
