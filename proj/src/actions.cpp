#include "allostery/actions.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "allostery/parallel.hpp"

namespace allostery {

PointedAction::PointedAction(Presentation pres, std::vector<Permutation> perms, Point basepoint,
                             nlohmann::json meta)
    : pres_(std::move(pres)),
      degree_(perms.empty() ? 0 : static_cast<Point>(perms.front().size())),
      perms_(std::move(perms)),
      basepoint_(basepoint),
      meta_(std::move(meta)) {
  if (static_cast<int>(perms_.size()) != pres_.num_generators()) {
    well_formed_ = false;
  }
  inverses_.resize(perms_.size());
  for (std::size_t g = 0; g < perms_.size(); ++g) {
    const auto& p = perms_[g];
    auto& inv = inverses_[g];
    inv.assign(degree_, kNoPoint);
    if (p.size() != degree_) {
      well_formed_ = false;
      continue;
    }
    for (Point x = 0; x < degree_; ++x) {
      Point y = p[x];
      if (y >= degree_ || inv[y] != kNoPoint) {
        well_formed_ = false;
        continue;
      }
      inv[y] = x;
    }
  }
}

namespace {

std::vector<Letter> letter_order(const Presentation& pres) {
  std::vector<Letter> order;
  for (int g = 0; g < pres.num_generators(); ++g) {
    order.push_back(positive_letter(g));
    order.push_back(-positive_letter(g));
  }
  return order;
}

void check_letters(const PointedAction& action, const Word& w) {
  for (Letter l : w) {
    if (generator_of(l) >= action.presentation().num_generators()) {
      throw ForeignGenerators("word uses letters outside the action's presentation");
    }
  }
}

// Orbit label of every point (label = smallest point of the orbit).
std::vector<Point> orbit_labels(const PointedAction& action) {
  const Point m = action.degree();
  std::vector<Point> label(m, kNoPoint);
  auto letters = letter_order(action.presentation());
  for (Point s = 0; s < m; ++s) {
    if (label[s] != kNoPoint) {
      continue;
    }
    label[s] = s;
    std::vector<Point> stack{s};
    while (!stack.empty()) {
      Point v = stack.back();
      stack.pop_back();
      for (Letter l : letters) {
        Point u = action.image(l, v);
        if (label[u] == kNoPoint) {
          label[u] = s;
          stack.push_back(u);
        }
      }
    }
  }
  return label;
}

}  // namespace

ActionReport verify_action(const PointedAction& action) {
  ActionReport rep;
  const auto& pres = action.presentation();
  const Point m = action.degree();
  if (static_cast<int>(action.perms().size()) != pres.num_generators() || m == 0) {
    rep.ok = false;
    rep.axiom = "shape";
    rep.detail = "expected one nonempty permutation per generator";
    return rep;
  }
  for (int g = 0; g < pres.num_generators(); ++g) {
    const auto& p = action.perm(g);
    if (p.size() != m) {
      rep.ok = false;
      rep.axiom = "shape";
      rep.detail = "permutation of " + pres.generator_name(g) + " has wrong length";
      return rep;
    }
    std::vector<Point> seen(m, kNoPoint);
    for (Point x = 0; x < m; ++x) {
      if (p[x] >= m) {
        rep.ok = false;
        rep.axiom = "malformed";
        rep.detail = pres.generator_name(g) + " maps a point outside the point set";
        rep.witness_points = {x};
        return rep;
      }
      if (seen[p[x]] != kNoPoint) {
        rep.ok = false;
        rep.axiom = "malformed";
        rep.detail = pres.generator_name(g) + " is not a bijection";
        rep.witness_points = {seen[p[x]], x};
        return rep;
      }
      seen[p[x]] = x;
    }
  }
  if (action.basepoint() >= m) {
    rep.ok = false;
    rep.axiom = "basepoint";
    rep.detail = "basepoint outside the point set";
    return rep;
  }
  const Word& rel = pres.relator();
  for (Point x = 0; x < m; ++x) {
    if (action.act(rel, x) != x) {
      rep.ok = false;
      rep.axiom = "relator";
      rep.detail = "relator moves a point";
      rep.witness_points = {x};
      return rep;
    }
  }
  auto labels = orbit_labels(action);
  std::vector<Point> reps;
  for (Point x = 0; x < m; ++x) {
    if (labels[x] == x) {
      reps.push_back(x);
    }
  }
  if (reps.size() > 1) {
    rep.ok = false;
    rep.axiom = "transitivity";
    rep.detail = std::to_string(reps.size()) + " orbits";
    rep.witness_points = reps;
    return rep;
  }
  rep.index = m;
  return rep;
}

Point act(const PointedAction& action, const Word& w, Point x) {
  check_letters(action, w);
  return action.act(w, x);
}

std::vector<Point> fix_set(const PointedAction& action, const Word& w) {
  check_letters(action, w);
  std::vector<Point> out;
  for (Point x = 0; x < action.degree(); ++x) {
    if (action.act(w, x) == x) {
      out.push_back(x);
    }
  }
  return out;
}

std::vector<Point> fix_all(const PointedAction& action, std::span<const Word> words) {
  for (const auto& w : words) {
    check_letters(action, w);
  }
  std::vector<Point> out;
  for (Point x = 0; x < action.degree(); ++x) {
    bool fixed = std::all_of(words.begin(), words.end(),
                             [&](const Word& w) { return action.act(w, x) == x; });
    if (fixed) {
      out.push_back(x);
    }
  }
  return out;
}

std::uint64_t count_fixed(const PointedAction& action, std::span<const Word> words) {
  return count_cylinder(action, words, {});
}

std::uint64_t count_cylinder(const PointedAction& action, std::span<const Word> fixed,
                             std::span<const Word> moved) {
  for (const auto& w : fixed) {
    check_letters(action, w);
  }
  for (const auto& w : moved) {
    check_letters(action, w);
  }
  return parallel_count(action.degree(), [&](std::uint64_t i) {
    auto x = static_cast<Point>(i);
    for (const auto& w : fixed) {
      if (action.act(w, x) != x) {
        return false;
      }
    }
    for (const auto& w : moved) {
      if (action.act(w, x) == x) {
        return false;
      }
    }
    return true;
  });
}

PointedAction product_intersection(const PointedAction& first, const PointedAction& second) {
  if (!(first.presentation() == second.presentation())) {
    throw PresentationMismatch("product_intersection of actions of different presentations");
  }
  const auto& pres = first.presentation();
  const std::uint64_t m2 = second.degree();
  const std::uint64_t total = static_cast<std::uint64_t>(first.degree()) * m2;
  if (total >= kNoPoint) {
    throw DomainError("product action too large to materialize");
  }
  const bool dense = total <= (1ull << 27);
  std::vector<Point> dense_index;
  std::unordered_map<std::uint64_t, Point> sparse_index;
  if (dense) {
    dense_index.assign(total, kNoPoint);
  }
  std::vector<std::uint64_t> pairs;
  auto lookup = [&](std::uint64_t key) -> Point {
    if (dense) {
      return dense_index[key];
    }
    auto it = sparse_index.find(key);
    return it == sparse_index.end() ? kNoPoint : it->second;
  };
  auto insert = [&](std::uint64_t key) -> Point {
    auto idx = static_cast<Point>(pairs.size());
    pairs.push_back(key);
    if (dense) {
      dense_index[key] = idx;
    } else {
      sparse_index.emplace(key, idx);
    }
    return idx;
  };
  insert(first.basepoint() * m2 + second.basepoint());
  const int ngens = pres.num_generators();
  std::vector<Permutation> perms(static_cast<std::size_t>(ngens));
  auto letters = letter_order(pres);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto x = static_cast<Point>(pairs[k] / m2);
    auto y = static_cast<Point>(pairs[k] % m2);
    for (Letter l : letters) {
      std::uint64_t key = static_cast<std::uint64_t>(first.image(l, x)) * m2 + second.image(l, y);
      Point idx = lookup(key);
      if (idx == kNoPoint) {
        idx = insert(key);
      }
      if (l > 0) {
        auto& p = perms[static_cast<std::size_t>(generator_of(l))];
        if (p.size() <= k) {
          p.resize(k + 1, kNoPoint);
        }
        p[k] = idx;
      }
    }
  }
  nlohmann::json meta = {{"component", "product"},
                         {"factors", {first.degree(), second.degree()}}};
  return PointedAction(pres, std::move(perms), 0, std::move(meta));
}

std::vector<Point> breadth_first_order(const PointedAction& action) {
  std::vector<Point> order;
  std::vector<bool> seen(action.degree(), false);
  order.push_back(action.basepoint());
  seen[action.basepoint()] = true;
  auto letters = letter_order(action.presentation());
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (Letter l : letters) {
      Point u = action.image(l, order[k]);
      if (!seen[u]) {
        seen[u] = true;
        order.push_back(u);
      }
    }
  }
  return order;
}

std::vector<Word> transversal_words(const PointedAction& action) {
  const Point m = action.degree();
  std::vector<Point> parent(m, kNoPoint);
  std::vector<Word> words(m);
  std::vector<Point> queue{action.basepoint()};
  parent[action.basepoint()] = action.basepoint();
  auto letters = letter_order(action.presentation());
  for (std::size_t k = 0; k < queue.size(); ++k) {
    Point v = queue[k];
    for (Letter l : letters) {
      Point u = action.image(l, v);
      if (parent[u] == kNoPoint) {
        parent[u] = v;
        words[u] = words[v] * Word{l};
        queue.push_back(u);
      }
    }
  }
  return words;
}

std::vector<Point> quotient_map(const PointedAction& fine, const PointedAction& coarse) {
  if (!(fine.presentation() == coarse.presentation())) {
    throw PresentationMismatch("quotient_map between actions of different presentations");
  }
  const Point m = fine.degree();
  std::vector<Point> map(m, kNoPoint);
  std::vector<Point> parent(m, kNoPoint);
  std::vector<Letter> via(m, 0);
  auto path = [&](Point v) {
    std::vector<Letter> rev;
    while (v != fine.basepoint()) {
      rev.push_back(via[v]);
      v = parent[v];
    }
    std::reverse(rev.begin(), rev.end());
    return Word(rev);
  };
  map[fine.basepoint()] = coarse.basepoint();
  parent[fine.basepoint()] = fine.basepoint();
  std::vector<Point> queue{fine.basepoint()};
  auto letters = letter_order(fine.presentation());
  for (std::size_t k = 0; k < queue.size(); ++k) {
    Point v = queue[k];
    for (Letter l : letters) {
      Point u = fine.image(l, v);
      Point expected = coarse.image(l, map[v]);
      if (map[u] == kNoPoint) {
        map[u] = expected;
        parent[u] = v;
        via[u] = l;
        queue.push_back(u);
      } else if (map[u] != expected) {
        Word witness = path(v) * Word{l} * path(u).inverse();
        throw NotAQuotient("fine basepoint stabilizer is not contained in the coarse one",
                           witness);
      }
    }
  }
  if (queue.size() != m) {
    throw NotAQuotient("fine action is not transitive", Word{});
  }
  if (coarse.degree() == 0 || m % coarse.degree() != 0) {
    throw NotAQuotient("degree of the coarse action does not divide the fine degree", Word{});
  }
  std::vector<Point> fiber(coarse.degree(), 0);
  for (Point x = 0; x < m; ++x) {
    ++fiber[map[x]];
  }
  const Point expected = m / coarse.degree();
  for (Point y = 0; y < coarse.degree(); ++y) {
    if (fiber[y] != expected) {
      throw NotAQuotient("fibers of unequal size (point " + std::to_string(y) + ")", Word{});
    }
  }
  return map;
}

PointedAction relabel(const PointedAction& action, std::span<const Point> relabel) {
  const Point m = action.degree();
  std::vector<Permutation> perms(action.perms().size(), Permutation(m));
  for (std::size_t g = 0; g < perms.size(); ++g) {
    for (Point x = 0; x < m; ++x) {
      perms[g][relabel[x]] = relabel[action.perms()[g][x]];
    }
  }
  return PointedAction(action.presentation(), std::move(perms), relabel[action.basepoint()],
                       action.meta());
}

PointedAction canonical_form(const PointedAction& action) {
  auto order = breadth_first_order(action);
  if (order.size() != action.degree()) {
    throw DomainError("canonical form requires a transitive action");
  }
  std::vector<Point> newindex(action.degree());
  for (Point k = 0; k < order.size(); ++k) {
    newindex[order[k]] = k;
  }
  return relabel(action, newindex);
}

PointedAction trivial_action(const Presentation& pres) {
  std::vector<Permutation> perms(static_cast<std::size_t>(pres.num_generators()), Permutation{0});
  return PointedAction(pres, std::move(perms), 0, {{"component", "trivial"}});
}

}  // namespace allostery
