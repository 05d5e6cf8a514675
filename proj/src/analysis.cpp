#include "allostery/analysis.hpp"

#include <algorithm>
#include <bit>

namespace allostery {

namespace {

constexpr std::size_t kMaxMoved = 16;

void check_level(const Chain& chain, int level) {
  if (level < 0 || level > chain.depth()) {
    throw DomainError("level " + std::to_string(level) + " outside the chain depth " +
                      std::to_string(chain.depth()));
  }
}

// For each subset T of `moved` (bitmask), the number of points fixed by
// `fixed` and by every word of T.
std::vector<std::uint64_t> superset_counts(const PointedAction& act, std::span<const Word> fixed,
                                           std::span<const Word> moved) {
  const std::size_t k = moved.size();
  std::vector<std::uint64_t> exact(std::size_t{1} << k, 0);
  for (Point x = 0; x < act.degree(); ++x) {
    bool ok = std::all_of(fixed.begin(), fixed.end(),
                          [&](const Word& w) { return act.act(w, x) == x; });
    if (!ok) {
      continue;
    }
    std::size_t mask = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (act.act(moved[i], x) == x) {
        mask |= std::size_t{1} << i;
      }
    }
    ++exact[mask];
  }
  // Sum over supersets.
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t m = 0; m < exact.size(); ++m) {
      if (!(m & (std::size_t{1} << i))) {
        exact[m] += exact[m | (std::size_t{1} << i)];
      }
    }
  }
  return exact;
}

}  // namespace

Rational cylinder_measure_components(const Chain& chain, std::span<const Word> fixed,
                                     std::span<const Word> moved, int level) {
  check_level(chain, level);
  if (moved.size() > kMaxMoved) {
    throw DomainError("at most 16 excluded words are supported");
  }
  const std::size_t subsets = std::size_t{1} << moved.size();
  std::vector<Rational> fixed_fraction(subsets, Rational(1));
  for (const auto* c : chain.components(level)) {
    auto counts = superset_counts(*c, fixed, moved);
    for (std::size_t m = 0; m < subsets; ++m) {
      fixed_fraction[m] *= Rational(BigInt(counts[m]), BigInt(c->degree()));
    }
  }
  Rational total = 0;
  for (std::size_t m = 0; m < subsets; ++m) {
    if (std::popcount(m) % 2 == 0) {
      total += fixed_fraction[m];
    } else {
      total -= fixed_fraction[m];
    }
  }
  return total;
}

Rational cylinder_measure_materialized(const Chain& chain, std::span<const Word> fixed,
                                       std::span<const Word> moved, int level) {
  check_level(chain, level);
  if (level == 0) {
    auto one = trivial_action(chain.pres);
    return Rational(BigInt(count_cylinder(one, fixed, moved)), BigInt(1));
  }
  const auto* act = chain.materialized(level);
  if (act == nullptr) {
    throw DomainError("level " + std::to_string(level) + " is not materialized");
  }
  return Rational(BigInt(count_cylinder(*act, fixed, moved)), BigInt(act->degree()));
}

Rational cylinder_measure(const Chain& chain, std::span<const Word> fixed,
                          std::span<const Word> moved, int level) {
  check_level(chain, level);
  if (level == 0 || chain.materialized(level) != nullptr) {
    return cylinder_measure_materialized(chain, fixed, moved, level);
  }
  return cylinder_measure_components(chain, fixed, moved, level);
}

Rational fix_proportion(const Chain& chain, const Word& w, int level) {
  std::vector<Word> ws{w};
  return cylinder_measure(chain, ws, {}, level);
}

ProportionSeries cylinder_series(const Chain& chain, std::span<const Word> fixed,
                                 std::span<const Word> moved, std::span<const int> levels) {
  ProportionSeries s;
  s.fixed.assign(fixed.begin(), fixed.end());
  s.moved.assign(moved.begin(), moved.end());
  for (int level : levels) {
    s.levels.push_back(level);
    s.values.push_back(cylinder_measure(chain, fixed, moved, level));
    if (s.values.size() >= 2 && s.values.back() > s.values[s.values.size() - 2]) {
      s.monotone = false;
    }
  }
  return s;
}

nlohmann::json TrivialityCertificate::to_json(const Presentation& pres) const {
  nlohmann::json sep = nlohmann::json::array();
  for (const auto& [w, level] : separated) {
    sep.push_back({{"word", pres.format(w)}, {"level", level}});
  }
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& w : failures) {
    fails.push_back(pres.format(w));
  }
  return {{"length_bound", length_bound},
          {"max_level", max_level},
          {"words", separated.size() + failures.size()},
          {"separated", std::move(sep)},
          {"failures", std::move(fails)}};
}

TrivialityCertificate urs_certificate(const Chain& chain, int length_bound, int max_level) {
  if (length_bound < 1) {
    throw DomainError("length bound must be at least 1");
  }
  check_level(chain, max_level);
  TrivialityCertificate cert;
  cert.length_bound = length_bound;
  cert.max_level = max_level;
  auto comps = chain.components(max_level);
  for (const auto& w : enumerate_nontrivial(chain.pres, length_bound)) {
    int first = 0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (comps[i]->act(w, comps[i]->basepoint()) != comps[i]->basepoint()) {
        first = static_cast<int>(i) + 1;
        break;
      }
    }
    if (first == 0) {
      cert.failures.push_back(w);
    } else {
      cert.separated.emplace_back(w, first);
    }
  }
  return cert;
}

nlohmann::json CompareReport::to_json() const {
  return {{"level", level},
          {"s", to_string(s)},
          {"t", to_string(t)},
          {"measure_s", to_string(measure_s)},
          {"measure_t", to_string(measure_t)},
          {"gap", to_string(gap)},
          {"tail_s", to_string(tail_s)},
          {"tail_t", to_string(tail_t)},
          {"tails_small", tails_small},
          {"distinct", distinct}};
}

CompareReport compare_chains(const Chain& chain_s, const Chain& chain_t, int level) {
  if (!(chain_s.pres == chain_t.pres)) {
    throw PresentationMismatch("chains are over different presentations");
  }
  auto gens = gamma_a_words(chain_s.pres);
  CompareReport r;
  r.level = level;
  r.s = chain_s.t;
  r.t = chain_t.t;
  r.measure_s = cylinder_measure(chain_s, gens, {}, level);
  r.measure_t = cylinder_measure(chain_t, gens, {}, level);
  r.gap = abs(r.measure_s - r.measure_t);
  r.tail_s = r.measure_s - r.s;
  r.tail_t = r.measure_t - r.t;
  Rational diff = abs(r.s - r.t);
  r.tails_small = diff > 0 && abs(r.tail_s) < diff / 4 && abs(r.tail_t) < diff / 4;
  r.distinct = r.tails_small && r.gap > diff / 2;
  return r;
}

std::vector<Word> stabilizer_ball(const Chain& chain, int level, int length_bound) {
  check_level(chain, level);
  std::vector<Word> out;
  for (auto& w : enumerate_ball(chain.pres, length_bound)) {
    if (!chain.moves_basepoint(w, level)) {
      out.push_back(std::move(w));
    }
  }
  return out;
}

InducedMeasure induced_gamma_a_measure(const Chain& chain, const EmbeddingData& ed, int level) {
  if (!(chain.pres == ed.orientable)) {
    throw PresentationMismatch("chain is not over the orientation subgroup presentation");
  }
  check_level(chain, level);
  InducedMeasure m;
  m.t_n = cylinder_measure(chain, gamma_a_words(chain.pres), {}, level);
  m.c_n = cylinder_measure(chain, conjugated_gamma_a_words(ed), {}, level);
  m.value = (m.t_n + m.c_n) / 2;
  const PointedAction* base = chain.materialized(level);
  std::optional<PointedAction> one;
  if (level == 0) {
    one = trivial_action(chain.pres);
    base = &*one;
  }
  if (base != nullptr) {
    auto induced = induce(*base, ed);
    std::vector<Word> images;
    for (Letter l : ed.orientable.gamma_a_generators()) {
      images.push_back(ed.images[static_cast<std::size_t>(generator_of(l))]);
    }
    m.direct = Rational(BigInt(count_fixed(induced, images)), BigInt(induced.degree()));
  }
  return m;
}

}  // namespace allostery
