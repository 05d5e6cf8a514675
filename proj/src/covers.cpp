#include "allostery/covers.hpp"

#include <algorithm>
#include <limits>

#include "allostery/random.hpp"

namespace allostery {

SchreierData schreier_data(const PointedAction& act) {
  SchreierData sd;
  sd.action = &act;
  const Point m = act.degree();
  const int ngens = act.presentation().num_generators();
  sd.ngens = ngens;
  sd.parent.assign(m, kNoPoint);
  sd.parent_letter.assign(m, 0);
  std::vector<bool> seen(m, false);
  std::vector<bool> tree(static_cast<std::size_t>(m) * static_cast<std::size_t>(ngens), false);
  std::vector<Point> queue{act.basepoint()};
  seen[act.basepoint()] = true;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    Point v = queue[k];
    for (int g = 0; g < ngens; ++g) {
      for (Letter l : {positive_letter(g), -positive_letter(g)}) {
        Point u = act.image(l, v);
        if (seen[u]) {
          continue;
        }
        seen[u] = true;
        sd.parent[u] = v;
        sd.parent_letter[u] = l;
        Point tail = l > 0 ? v : u;
        tree[static_cast<std::size_t>(tail) * static_cast<std::size_t>(ngens) +
             static_cast<std::size_t>(g)] = true;
        queue.push_back(u);
      }
    }
  }
  if (queue.size() != m) {
    throw DomainError("Schreier data requires a transitive action");
  }
  sd.edge_index.assign(tree.size(), -1);
  std::uint32_t next = 0;
  for (std::size_t e = 0; e < tree.size(); ++e) {
    if (!tree[e]) {
      sd.edge_index[e] = static_cast<std::int32_t>(next++);
    }
  }
  sd.num_edges = next;
  return sd;
}

EdgeWalk walk_edges(const SchreierData& sd, const Word& w, Point start) {
  const auto& act = *sd.action;
  EdgeWalk walk{start, {}};
  std::vector<std::pair<std::uint32_t, long long>> raw;
  Point x = start;
  for (Letter l : w) {
    int g = generator_of(l);
    if (g >= sd.ngens) {
      throw ForeignGenerators("word uses letters outside the action's presentation");
    }
    if (l > 0) {
      auto e = sd.edge(x, g);
      if (e >= 0) {
        raw.emplace_back(static_cast<std::uint32_t>(e), 1);
      }
      x = act.image(l, x);
    } else {
      Point y = act.image(l, x);
      auto e = sd.edge(y, g);
      if (e >= 0) {
        raw.emplace_back(static_cast<std::uint32_t>(e), -1);
      }
      x = y;
    }
  }
  walk.end = x;
  std::sort(raw.begin(), raw.end());
  for (const auto& [e, c] : raw) {
    if (!walk.counts.empty() && walk.counts.back().first == e) {
      walk.counts.back().second += c;
    } else {
      walk.counts.emplace_back(e, c);
    }
  }
  std::erase_if(walk.counts, [](const auto& ec) { return ec.second == 0; });
  return walk;
}

namespace {

SparseRow walk_row(const EdgeWalk& walk, const PrimeField& f) {
  SparseRow row;
  for (const auto& [e, c] : walk.counts) {
    Residue r = f.from_int(c);
    if (r != 0) {
      row.push_back({e, r});
    }
  }
  return row;
}

}  // namespace

SchreierClass schreier_class(const SchreierData& sd, const Word& w, Point start, unsigned p) {
  PrimeField f(p);
  auto walk = walk_edges(sd, w, start);
  return {walk.end, to_dense(walk_row(walk, f), sd.num_edges)};
}

HomologyData::HomologyData(const PointedAction& act, unsigned p, std::vector<Loop> kills)
    : p_(p),
      schreier_(schreier_data(act)),
      kills_(std::move(kills)),
      echelon_(p, schreier_.num_edges) {
  PrimeField f(p);
  const Word& relator = act.presentation().relator();
  relator_rows_.reserve(act.degree());
  for (Point v = 0; v < act.degree(); ++v) {
    auto walk = walk_edges(schreier_, relator, v);
    if (walk.end != v) {
      throw RelatorFailure("relator does not close at point " + std::to_string(v));
    }
    relator_rows_.push_back(walk_row(walk, f));
    echelon_.insert(relator_rows_.back());
  }
  for (const auto& k : kills_) {
    auto walk = walk_edges(schreier_, k.word, k.point);
    if (walk.end != k.point) {
      throw KillWordNotInSubgroup("kill word " + act.presentation().format(k.word) +
                                      " does not close at point " + std::to_string(k.point),
                                  k.word, k.point, walk.end);
    }
    kill_rows_.push_back(walk_row(walk, f));
    echelon_.insert(kill_rows_.back());
  }
}

SparseRow HomologyData::loop_row(const Loop& loop) const {
  auto walk = walk_edges(schreier_, loop.word, loop.point);
  if (walk.end != loop.point) {
    throw KillWordNotInSubgroup(
        "word " + schreier_.action->presentation().format(loop.word) +
            " does not close at point " + std::to_string(loop.point),
        loop.word, loop.point, walk.end);
  }
  PrimeField f(p_);
  return walk_row(walk, f);
}

FpVector HomologyData::loop_vector(const Loop& loop) const {
  return to_dense(loop_row(loop), schreier_.num_edges);
}

SparseRow HomologyData::loop_class_sparse(const Loop& loop) const {
  return echelon_.project_sparse(loop_row(loop));
}

FpVector HomologyData::loop_class(const Loop& loop) const {
  return to_dense(loop_class_sparse(loop), dimension());
}

namespace {

nlohmann::json dense_rows(const std::vector<SparseRow>& rows, std::size_t columns) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back(to_dense(r, columns));
  }
  return out;
}

nlohmann::json loop_json(const Presentation& pres, const Loop& l) {
  return {{"point", l.point}, {"word", pres.format(l.word)}};
}

}  // namespace

nlohmann::json HomologyData::to_json() const {
  const auto& pres = schreier_.action->presentation();
  nlohmann::json kills = nlohmann::json::array();
  for (const auto& k : kills_) {
    kills.push_back(loop_json(pres, k));
  }
  return {{"p", p_},
          {"degree", schreier_.action->degree()},
          {"edges", schreier_.num_edges},
          {"dimension", dimension()},
          {"free_columns", echelon_.free_columns()},
          {"kills", std::move(kills)},
          {"relator_rows", dense_rows(relator_rows_, schreier_.num_edges)},
          {"kill_rows", dense_rows(kill_rows_, schreier_.num_edges)}};
}

HomologyData homology(const PointedAction& act, unsigned p, std::span<const Word> kill_words) {
  std::vector<Loop> loops;
  for (const auto& w : kill_words) {
    loops.push_back({act.basepoint(), w});
  }
  return HomologyData(act, p, std::move(loops));
}

HomologyData homology(const PointedAction& act, unsigned p, std::span<const Loop> kill_loops) {
  return HomologyData(act, p, std::vector<Loop>(kill_loops.begin(), kill_loops.end()));
}

FpVector SeparationMap::apply(const FpVector& h) const {
  PrimeField f(p);
  FpVector out(rank, 0);
  for (std::size_t i = 0; i < rank; ++i) {
    out[i] = f.dot(matrix[i], h);
  }
  return out;
}

nlohmann::json SeparationMap::to_json(const Presentation& pres) const {
  nlohmann::json t = nlohmann::json::array();
  for (std::size_t i = 0; i < targets.size(); ++i) {
    auto j = loop_json(pres, targets[i]);
    j["image"] = images[i];
    t.push_back(std::move(j));
  }
  return {{"p", p},         {"rank", rank},       {"dimension", dimension},
          {"seed", seed},   {"attempt", attempt}, {"matrix", matrix},
          {"targets", std::move(t)}};
}

namespace {

std::vector<FpVector> random_matrix(Rng& rng, unsigned p, std::size_t rows, std::size_t cols) {
  std::vector<FpVector> m(rows, FpVector(cols));
  for (auto& row : m) {
    for (auto& x : row) {
      x = static_cast<Residue>(rng.below(p));
    }
  }
  return m;
}

bool is_zero(const FpVector& v) {
  return std::all_of(v.begin(), v.end(), [](Residue x) { return x == 0; });
}

}  // namespace

SeparationMap search_separation(const HomologyData& hd, std::span<const Loop> targets,
                                std::uint64_t seed, SeparationConfig config) {
  const auto& pres = hd.schreier().action->presentation();
  std::vector<SparseRow> classes;
  for (const auto& t : targets) {
    auto c = hd.loop_class_sparse(t);
    if (c.empty()) {
      throw TargetInvisible("target " + pres.format(t.word) + " at point " +
                                std::to_string(t.point) + " has zero class in H",
                            t);
    }
    classes.push_back(std::move(c));
  }
  SeparationMap sm;
  sm.p = hd.p();
  sm.dimension = hd.dimension();
  sm.seed = seed;
  sm.targets.assign(targets.begin(), targets.end());
  if (targets.empty()) {
    return sm;
  }
  const std::size_t cap = std::min(config.rank_cap, hd.dimension());
  const PrimeField field(hd.p());
  for (std::size_t m = 1; m <= cap; ++m) {
    for (unsigned attempt = 0; attempt < config.retries; ++attempt) {
      Rng rng(derive_seed(seed, m, attempt));
      sm.rank = m;
      sm.attempt = attempt;
      sm.matrix = random_matrix(rng, hd.p(), m, hd.dimension());
      if (fp_rank(sm.matrix, hd.p()) != m) {
        continue;
      }
      sm.images.clear();
      bool ok = true;
      for (const auto& c : classes) {
        FpVector img(m, 0);
        for (std::size_t i = 0; i < m; ++i) {
          img[i] = field.dot(sm.matrix[i], c);
        }
        if (is_zero(img)) {
          ok = false;
          break;
        }
        sm.images.push_back(std::move(img));
      }
      if (ok) {
        return sm;
      }
    }
  }
  throw RankExhausted("no separation map up to rank " + std::to_string(cap) + " after " +
                      std::to_string(config.retries) + " draws per rank");
}

SeparationMap search_separation(const HomologyData& hd, std::span<const Word> targets,
                                std::uint64_t seed, SeparationConfig config) {
  std::vector<Loop> loops;
  for (const auto& w : targets) {
    loops.push_back({hd.schreier().action->basepoint(), w});
  }
  return search_separation(hd, loops, seed, config);
}

SeparationMap random_separation(const HomologyData& hd, std::size_t rank, std::uint64_t seed) {
  if (rank > hd.dimension()) {
    throw DomainError("rank exceeds dim(H)");
  }
  SeparationMap sm;
  sm.p = hd.p();
  sm.dimension = hd.dimension();
  sm.seed = seed;
  sm.rank = rank;
  for (unsigned attempt = 0;; ++attempt) {
    Rng rng(derive_seed(seed, rank, attempt));
    sm.attempt = attempt;
    sm.matrix = random_matrix(rng, hd.p(), rank, hd.dimension());
    if (fp_rank(sm.matrix, hd.p()) == rank) {
      return sm;
    }
  }
}

PointedAction cocycle_cover(const PointedAction& act, const HomologyData& hd,
                            const SeparationMap& sm) {
  if (hd.schreier().action != &act && hd.schreier().action->degree() != act.degree()) {
    throw DomainError("homology data belongs to a different action");
  }
  if (sm.dimension != hd.dimension() || sm.p != hd.p()) {
    throw DomainError("separation map does not match the homology data");
  }
  const unsigned p = hd.p();
  const std::size_t m = sm.rank;
  std::uint64_t fiber = 1;
  for (std::size_t i = 0; i < m; ++i) {
    fiber *= p;
  }
  const std::uint64_t degree = static_cast<std::uint64_t>(act.degree()) * fiber;
  if (degree >= std::numeric_limits<Point>::max()) {
    throw DomainError("cocycle cover degree exceeds the point range");
  }
  std::vector<FpVector> functionals;
  for (const auto& row : sm.matrix) {
    functionals.push_back(hd.echelon().extend_functional(row));
  }
  const auto& sd = hd.schreier();
  const int ngens = act.presentation().num_generators();
  std::vector<Permutation> perms(static_cast<std::size_t>(ngens),
                                 Permutation(static_cast<std::size_t>(degree)));
  std::vector<Residue> digits(m);
  for (int g = 0; g < ngens; ++g) {
    auto& perm = perms[static_cast<std::size_t>(g)];
    for (Point v = 0; v < act.degree(); ++v) {
      auto e = sd.edge(v, g);
      for (std::size_t i = 0; i < m; ++i) {
        digits[i] = e >= 0 ? functionals[i][static_cast<std::size_t>(e)] : 0;
      }
      const std::uint64_t target = static_cast<std::uint64_t>(act.image(positive_letter(g), v)) * fiber;
      const std::uint64_t source = static_cast<std::uint64_t>(v) * fiber;
      for (std::uint64_t h = 0; h < fiber; ++h) {
        std::uint64_t rest = h;
        std::uint64_t moved = 0;
        std::uint64_t place = 1;
        for (std::size_t i = 0; i < m; ++i) {
          std::uint64_t digit = (rest % p + digits[i]) % p;
          rest /= p;
          moved += digit * place;
          place *= p;
        }
        perm[source + h] = static_cast<Point>(target + moved);
      }
    }
  }
  nlohmann::json meta = {{"component", "cocycle"},
                         {"p", p},
                         {"rank", m},
                         {"base_degree", act.degree()},
                         {"base", act.meta()}};
  return PointedAction(act.presentation(), std::move(perms),
                       static_cast<Point>(static_cast<std::uint64_t>(act.basepoint()) * fiber),
                       std::move(meta));
}

PointedAction cyclic_cover(const Presentation& pres, Point d) {
  if (d < 1) {
    throw DomainError("cyclic cover needs d >= 1");
  }
  std::vector<long long> shifts(static_cast<std::size_t>(pres.num_generators()), 0);
  shifts[static_cast<std::size_t>(generator_of(pres.distinguished()))] = 1;
  auto act = abelian_cover(pres, shifts, d);
  act.meta() = {{"component", "cyclic"}, {"d", d}};
  return act;
}

PointedAction abelian_cover(const Presentation& pres, std::span<const long long> shifts,
                            Point d) {
  if (d < 1) {
    throw DomainError("abelian cover needs d >= 1");
  }
  if (shifts.size() != static_cast<std::size_t>(pres.num_generators())) {
    throw DomainError("one shift per generator required");
  }
  auto sums = exponent_sums(pres, pres.relator());
  long long total = 0;
  for (std::size_t g = 0; g < shifts.size(); ++g) {
    total += sums[g] * shifts[g];
  }
  if (total % static_cast<long long>(d) != 0) {
    throw DomainError("shifts do not kill the relator");
  }
  std::vector<Permutation> perms;
  for (long long s : shifts) {
    long long r = s % static_cast<long long>(d);
    if (r < 0) {
      r += d;
    }
    Permutation perm(d);
    for (Point x = 0; x < d; ++x) {
      perm[x] = static_cast<Point>((x + static_cast<Point>(r)) % d);
    }
    perms.push_back(std::move(perm));
  }
  nlohmann::json meta = {{"component", "abelian"}, {"d", d}, {"shifts", shifts}};
  return PointedAction(pres, std::move(perms), 0, std::move(meta));
}

}  // namespace allostery
