#include <doctest.h>

#include <algorithm>
#include <set>

#include "allostery/analysis.hpp"
#include "allostery/random.hpp"
#include "oracles.hpp"

using namespace allostery;

namespace {

Presentation genus2() { return Presentation::orientable(1, 1); }

const Chain& chain_half() {
  static const Chain chain = [] {
    std::vector<unsigned> primes{3, 5};
    return build_chain(genus2(), Rational(1, 2), primes, 2, ChainConfig{});
  }();
  return chain;
}

const Chain& chain_third() {
  static const Chain chain = [] {
    std::vector<unsigned> primes{3, 5};
    return build_chain(genus2(), Rational(1, 3), primes, 2, ChainConfig{});
  }();
  return chain;
}

// Same chain with level 2 stored only through its components.
Chain implicit_copy(const Chain& chain) {
  Chain c = chain;
  for (auto& l : c.levels) {
    l.product.reset();
  }
  return c;
}

Rational oracle_measure(const PointedAction& act, const std::vector<Word>& in,
                        const std::vector<Word>& out) {
  auto inv = oracle::inverse_perms(act);
  std::uint64_t n = 0;
  for (Point x = 0; x < act.degree(); ++x) {
    bool ok = true;
    for (const auto& w : in) {
      ok = ok && oracle::apply(act, inv, w, x) == x;
    }
    for (const auto& w : out) {
      ok = ok && oracle::apply(act, inv, w, x) != x;
    }
    n += ok ? 1 : 0;
  }
  return Rational(BigInt(n), BigInt(act.degree()));
}

}  // namespace

TEST_CASE("fix proportions") {
  auto pres = genus2();
  const auto& chain = chain_half();
  CHECK(fix_proportion(chain, Word{}, 2) == 1);
  CHECK(fix_proportion(chain, pres.parse("a1"), 0) == 1);
  for (int n = 1; n <= 2; ++n) {
    CHECK(fix_proportion(chain, pres.parse("b1"), n) == 0);
  }
  Rational a1 = fix_proportion(chain, pres.parse("a1"), 1);
  CHECK(a1 >= Rational(5, 9));
  CHECK(a1 == oracle_measure(*chain.materialized(1), {pres.parse("a1")}, {}));
  // Non-increasing in level, for every short word.
  for (const auto& w : enumerate_nontrivial(pres, 2)) {
    Rational prev = 1;
    for (int n = 0; n <= 2; ++n) {
      Rational f = fix_proportion(chain, w, n);
      CHECK(f <= prev);
      prev = f;
    }
  }
  // Each gamma_n moves the basepoint at its level.
  for (int n = 1; n <= chain.depth(); ++n) {
    const auto& g = chain.levels[static_cast<std::size_t>(n - 1)].gamma;
    CHECK(fix_proportion(chain, g, n) < 1);
    CHECK(chain.moves_basepoint(g, n));
  }
}

TEST_CASE("Gamma_A cylinder equals the partial product") {
  auto pres = genus2();
  const auto& chain = chain_half();
  auto ga = gamma_a_words(pres);
  CHECK(cylinder_measure(chain, ga, {}, 0) == 1);
  CHECK(cylinder_measure(chain, ga, {}, 1) == Rational(5, 9));
  CHECK(cylinder_measure(chain, ga, {}, 2) == Rational(23, 45));
  CHECK(cylinder_measure(chain, {}, {}, 2) == 1);
  std::vector<Word> b{pres.parse("b1")};
  CHECK(cylinder_measure(chain, b, {}, 1) == 0);
  CHECK(cylinder_measure(chain, b, {}, 2) == 0);
  // Level value is the product of the per-component Gamma_A proportions.
  Rational product = 1;
  for (int n = 1; n <= 2; ++n) {
    const auto& lam = chain.levels[static_cast<std::size_t>(n - 1)].lambda;
    product *= Rational(BigInt(oracle::count_fixed(lam, ga)), BigInt(lam.degree()));
    CHECK(cylinder_measure(chain, ga, {}, n) == product);
  }
  CHECK(oracle_measure(*chain.materialized(2), ga, {}) == Rational(23, 45));
}

TEST_CASE("component and materialized counts agree") {
  auto pres = genus2();
  const auto& chain = chain_half();
  auto implicit = implicit_copy(chain);
  CHECK_THROWS_AS(cylinder_measure_materialized(implicit, {}, {}, 2), DomainError);
  auto words = enumerate_nontrivial(pres, 2);
  Rng rng(derive_seed(3, 0));
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Word> in;
    std::vector<Word> out;
    for (int k = 0; k < 3; ++k) {
      const auto& w = words[rng.below(words.size())];
      (rng.below(2) == 0 ? in : out).push_back(w);
    }
    for (int n = 1; n <= 2; ++n) {
      auto m = cylinder_measure_materialized(chain, in, out, n);
      CHECK(m == cylinder_measure_components(chain, in, out, n));
      CHECK(m == cylinder_measure(implicit, in, out, n));
      CHECK(m == oracle_measure(*chain.materialized(n), in, out));
    }
  }
}

TEST_CASE("inclusion-exclusion of cylinders") {
  auto pres = genus2();
  const auto& chain = chain_half();
  auto words = enumerate_nontrivial(pres, 2);
  Rng rng(derive_seed(5, 0));
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Word> in{words[rng.below(words.size())]};
    std::vector<Word> out{words[rng.below(words.size())], words[rng.below(words.size())]};
    for (int n = 0; n <= 2; ++n) {
      auto with_out = cylinder_measure(chain, in, out, n);
      auto in2 = in;
      in2.push_back(out.back());
      auto out2 = out;
      out2.pop_back();
      auto moved_in = cylinder_measure(chain, in2, out2, n);
      CHECK(with_out + moved_in == cylinder_measure(chain, in, out2, n));
    }
  }
}

TEST_CASE("cylinder series") {
  auto pres = genus2();
  const auto& chain = chain_half();
  auto ga = gamma_a_words(pres);
  std::vector<int> levels{0, 1, 2};
  auto s = cylinder_series(chain, ga, {}, levels);
  CHECK(s.monotone);
  CHECK(s.values == std::vector<Rational>{1, Rational(5, 9), Rational(23, 45)});
}

TEST_CASE("URS certificates") {
  auto pres = genus2();
  const auto& chain = chain_half();
  auto zero = urs_certificate(chain, 2, 0);
  CHECK(zero.failures.size() == enumerate_nontrivial(pres, 2).size());
  CHECK(zero.separated.empty());
  auto two = urs_certificate(chain, 2, 2);
  CHECK(two.failures.empty());
  CHECK(two.separated.size() == 64);
  for (const auto& [w, n] : two.separated) {
    CHECK(chain.moves_basepoint(w, n));
    if (n > 1) {
      CHECK_FALSE(chain.moves_basepoint(w, n - 1));
    }
    CHECK_FALSE(dehn_is_trivial(pres, w).trivial);
  }
  auto j = two.to_json(pres);
  CHECK(j["failures"].empty());
  CHECK_THROWS_AS(urs_certificate(chain, 0, 2), DomainError);
  // The relator has length 8 and is skipped when it falls inside the ball.
  auto eight = urs_certificate(chain, 1, 1);
  CHECK(eight.failures.size() + eight.separated.size() == 8);
}

TEST_CASE("stabilizer balls") {
  auto pres = genus2();
  const auto& chain = chain_half();
  CHECK(stabilizer_ball(chain, 0, 2).size() == 65);
  auto l1 = stabilizer_ball(chain, 1, 3);
  auto l2 = stabilizer_ball(chain, 2, 3);
  std::set<Word> s1(l1.begin(), l1.end());
  for (const auto& w : l2) {
    CHECK(s1.count(w) == 1);
    CHECK(oracle::apply(*chain.materialized(2), w, chain.materialized(2)->basepoint()) ==
          chain.materialized(2)->basepoint());
  }
  // Only the empty word survives the second level at length 2.
  auto deep = stabilizer_ball(chain, 2, 2);
  for (const auto& w : deep) {
    CHECK(dehn_is_trivial(pres, w).trivial);
  }
}

TEST_CASE("comparing chains") {
  const auto& half = chain_half();
  const auto& third = chain_third();
  auto self = compare_chains(half, half, 2);
  CHECK(self.gap == 0);
  CHECK_FALSE(self.distinct);

  auto r = compare_chains(third, half, 2);
  CHECK(r.measure_s == Rational(16, 45));
  CHECK(r.measure_t == Rational(23, 45));
  CHECK(r.gap == Rational(7, 45));
  CHECK(r.tail_s == Rational(1, 45));
  CHECK(r.tail_t == Rational(1, 90));
  CHECK(r.tails_small);
  CHECK(r.distinct);
  CHECK(r.gap > Rational(1, 12));
  auto j = r.to_json();
  CHECK(j["gap"] == "7/45");

  std::vector<unsigned> other{5, 7};
  auto alt = build_chain(genus2(), Rational(1, 2), other, 2, ChainConfig{});
  auto same_t = compare_chains(half, alt, 2);
  CHECK(same_t.gap < Rational(1, 2));
  CHECK_FALSE(same_t.distinct);

  auto g3 = build_chain(Presentation::orientable(1, 2), Rational(1, 2), std::vector<unsigned>{3}, 1,
                        ChainConfig{});
  CHECK_THROWS_AS(compare_chains(half, g3, 1), PresentationMismatch);
}
