#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "allostery/errors.hpp"
#include "allostery/words.hpp"

namespace allostery {

using Point = std::uint32_t;
using Permutation = std::vector<Point>;

inline constexpr Point kNoPoint = static_cast<Point>(-1);

// A finite permutation action of a presentation's free group on {0..m-1}
// with a basepoint, one dense image array per positive generator. Words act
// left to right: act(w, x) applies w[0] first.
//
// The constructor accepts arbitrary arrays so that verify_action can report
// malformed input; everything else assumes a verified action.
class PointedAction {
 public:
  PointedAction(Presentation pres, std::vector<Permutation> perms, Point basepoint = 0,
                nlohmann::json meta = nlohmann::json::object());

  const Presentation& presentation() const { return pres_; }
  Point degree() const { return degree_; }
  Point basepoint() const { return basepoint_; }
  const std::vector<Permutation>& perms() const { return perms_; }
  const Permutation& perm(int generator) const { return perms_[static_cast<std::size_t>(generator)]; }
  const nlohmann::json& meta() const { return meta_; }
  nlohmann::json& meta() { return meta_; }
  bool well_formed() const { return well_formed_; }

  Point image(Letter l, Point x) const {
    auto g = static_cast<std::size_t>(generator_of(l));
    return l > 0 ? perms_[g][x] : inverses_[g][x];
  }

  Point act(const Word& w, Point x) const {
    for (Letter l : w) {
      x = image(l, x);
    }
    return x;
  }

 private:
  Presentation pres_;
  Point degree_;
  std::vector<Permutation> perms_;
  std::vector<Permutation> inverses_;
  Point basepoint_;
  nlohmann::json meta_;
  bool well_formed_ = true;
};

struct ActionReport {
  bool ok = true;
  // "shape", "malformed", "basepoint", "relator" or "transitivity".
  std::string axiom;
  std::string detail;
  std::vector<Point> witness_points;
  Point index = 0;  // [Gamma : Lambda] = degree when ok
};

ActionReport verify_action(const PointedAction& act);

// Throws ForeignGenerators when w uses letters outside the presentation.
Point act(const PointedAction& action, const Word& w, Point x);
std::vector<Point> fix_set(const PointedAction& action, const Word& w);
// Points fixed by every word of `words`; a point set is fixed by a subgroup
// iff it is fixed by a generating set.
std::vector<Point> fix_all(const PointedAction& action, std::span<const Word> words);
std::uint64_t count_fixed(const PointedAction& action, std::span<const Word> words);
// Points fixed by every word of `fixed` and by no word of `moved`.
std::uint64_t count_cylinder(const PointedAction& action, std::span<const Word> fixed,
                             std::span<const Word> moved);

// The orbit of (basepoint, basepoint) in the diagonal action, renumbered in
// breadth-first order. Its basepoint stabilizer is the intersection of the
// two basepoint stabilizers.
PointedAction product_intersection(const PointedAction& first, const PointedAction& second);

class NotAQuotient : public Error {
 public:
  NotAQuotient(std::string message, Word witness)
      : Error(std::move(message)), witness_(std::move(witness)) {}
  const Word& witness() const { return witness_; }

 private:
  Word witness_;
};

// The basepoint-preserving equivariant surjection fine -> coarse, with every
// fiber of size degree(fine) / degree(coarse). Throws NotAQuotient with a
// word fixing the fine basepoint but moving the coarse one.
std::vector<Point> quotient_map(const PointedAction& fine, const PointedAction& coarse);

// Breadth-first order from the basepoint, generators in presentation order,
// each generator before its inverse. order[k] is the k-th discovered point.
std::vector<Point> breadth_first_order(const PointedAction& action);
// Word carrying the basepoint to each point along the breadth-first tree.
std::vector<Word> transversal_words(const PointedAction& action);

// Renumbers points: new index of old point x is relabel[x].
PointedAction relabel(const PointedAction& action, std::span<const Point> relabel);
PointedAction canonical_form(const PointedAction& action);
PointedAction trivial_action(const Presentation& pres);

// Deterministic JSON text; equal subgroups give byte-identical output when
// `with_meta` is false (meta carries construction provenance).
std::string canonical_serialize(const PointedAction& action, bool with_meta = true);

nlohmann::json action_to_json(const PointedAction& action);
PointedAction action_from_json(const nlohmann::json& j);

// Writes the action as canonical JSON. When degree exceeds
// `sidecar_threshold`, permutations go to "<path>.perms.bin" as little-endian
// u32 arrays (one per generator, presentation order) referenced from the JSON.
void save_action(const std::string& path, const PointedAction& action,
                 Point sidecar_threshold = 1u << 16);
PointedAction load_action(const std::string& path);

}  // namespace allostery
