#include <doctest.h>

#include "allostery/analysis.hpp"
#include "allostery/covers.hpp"
#include "allostery/induction.hpp"
#include "oracles.hpp"

using namespace allostery;

namespace {

int exponent_sum(const Word& w) {
  int s = 0;
  for (Letter l : w) {
    s += l > 0 ? 1 : -1;
  }
  return s;
}

std::vector<PointedAction> samples(const Presentation& pres) {
  std::vector<PointedAction> out;
  out.push_back(trivial_action(pres));
  out.push_back(cyclic_cover(pres, 3));
  out.push_back(cyclic_cover(pres, 4));
  auto c2 = cyclic_cover(pres, 2);
  auto hd = homology(c2, 3, std::span<const Word>{});
  out.push_back(cocycle_cover(c2, hd, random_separation(hd, 1, 5)));
  return out;
}

}  // namespace

TEST_CASE("orientation double cover shape") {
  for (int g = 3; g <= 6; ++g) {
    auto ed = orientation_double_cover(g);
    // 2 - 2g' = 2 (2 - g), so the orientable genus is g - 1.
    CHECK(ed.orientable.genus() == g - 1);
    CHECK(ed.orientable.size_a() == (g - 1) / 2);
    CHECK(ed.images.size() == static_cast<std::size_t>(ed.orientable.num_generators()));
    for (const auto& w : ed.images) {
      CHECK(exponent_sum(w) % 2 == 0);
    }
    for (int p : ed.parity) {
      CHECK(p == 1);
    }
    auto report = verify_embedding(ed);
    CHECK(report.ok);
    auto back = EmbeddingData::from_json(ed.to_json());
    CHECK(back.to_json() == ed.to_json());
  }
  CHECK_THROWS_AS(orientation_double_cover(2), DomainError);
}

TEST_CASE("corrupted embeddings are rejected") {
  auto ed = orientation_double_cover(3);
  auto odd = ed;
  odd.images[0] = odd.images[0] * Word{ed.sigma};
  auto r = verify_embedding(odd);
  CHECK_FALSE(r.ok);
  CHECK(r.check == "a");

  // Swap one generator for another inside a conjugation word.
  bool rejected = false;
  for (std::size_t y = 0; y < ed.conjugation.size() && !rejected; ++y) {
    for (int e = 0; e < 2 && !rejected; ++e) {
      auto bad = ed;
      Word& w = bad.conjugation[y][static_cast<std::size_t>(e)];
      if (w.empty()) {
        continue;
      }
      std::vector<Letter> letters(w.begin(), w.end());
      Letter l = letters[0];
      int gen = (l > 0 ? l : -l) % ed.orientable.num_generators() + 1;
      letters[0] = l > 0 ? gen : -gen;
      w = Word(letters);
      auto rb = verify_embedding(bad);
      CHECK_FALSE(rb.ok);
      CHECK(rb.check == "c");
      rejected = true;
    }
  }
  CHECK(rejected);
}

TEST_CASE("induced actions") {
  auto ed = orientation_double_cover(3);
  const auto& pres = ed.orientable;
  auto one = induce(trivial_action(pres), ed);
  CHECK(one.degree() == 2);
  for (const auto& p : one.perms()) {
    CHECK(p == Permutation{1, 0});
  }
  for (const auto& act : samples(pres)) {
    REQUIRE(verify_action(act).ok);
    auto ind = induce(act, ed);
    CHECK(verify_action(ind).ok);
    CHECK(ind.degree() == 2 * act.degree());
    CHECK(oracle::transitive(ind));
    auto inv = oracle::inverse_perms(ind);
    auto inv_act = oracle::inverse_perms(act);
    // Every x_i swaps the sheets.
    for (const auto& p : ind.perms()) {
      for (Point x = 0; x < ind.degree(); ++x) {
        CHECK((x < act.degree()) != (p[x] < act.degree()));
      }
    }
    // Restriction to sheet 0 reproduces the action point for point.
    for (int g = 0; g < pres.num_generators(); ++g) {
      Word gen{g + 1};
      for (Point x = 0; x < act.degree(); ++x) {
        CHECK(oracle::apply(ind, inv, ed.images[static_cast<std::size_t>(g)], x) ==
              oracle::apply(act, inv_act, gen, x));
      }
    }
  }
}

TEST_CASE("Reidemeister-Schreier rewriting") {
  auto ed = orientation_double_cover(3);
  const auto& pres = ed.orientable;
  auto act = cyclic_cover(pres, 5);
  auto ind = induce(act, ed);
  auto inv = oracle::inverse_perms(ind);
  auto inv_act = oracle::inverse_perms(act);
  const auto& np = ed.nonorientable;
  for (const auto& w : enumerate_ball(np, 3)) {
    for (int sheet = 0; sheet < 2; ++sheet) {
      auto sw = rewrite_to_subgroup(ed, w, sheet);
      CHECK(sw.end_sheet == ((sheet + exponent_sum(w)) % 2 + 2) % 2);
      // t_sheet w t_end^-1 lies in Gamma and acts on sheet 0 as the rewrite.
      Word t_s = sheet == 1 ? Word{ed.sigma} : Word{};
      Word t_e = sw.end_sheet == 1 ? Word{ed.sigma} : Word{};
      Word full = t_s * w * t_e.inverse();
      for (Point x = 0; x < act.degree(); ++x) {
        CHECK(oracle::apply(ind, inv, full, x) == oracle::apply(act, inv_act, sw.word, x));
      }
    }
  }
}

TEST_CASE("induced Gamma_A measure") {
  auto ed = orientation_double_cover(3);
  std::vector<unsigned> primes{3, 5};
  auto chain = build_chain(ed.orientable, Rational(1, 2), primes, 2, ChainConfig{});
  auto ga = gamma_a_words(ed.orientable);
  std::vector<Word> ga_images;
  for (const auto& w : ga) {
    ga_images.push_back(ed.images[static_cast<std::size_t>(w[0] - 1)]);
  }
  auto phi = conjugated_gamma_a_words(ed);
  Rational first_c;
  for (int n = 0; n <= 2; ++n) {
    auto m = induced_gamma_a_measure(chain, ed, n);
    CHECK(m.value == (m.t_n + m.c_n) / 2);
    CHECK(m.t_n == cylinder_measure(chain, ga, {}, n));
    CHECK(m.c_n == cylinder_measure(chain, phi, {}, n));
    CHECK(m.value >= m.t_n / 2);
    CHECK(m.value <= (m.t_n + 1) / 2);
    if (n >= 1) {
      const auto* lvl = chain.materialized(n);
      REQUIRE(lvl != nullptr);
      auto ind = induce(*lvl, ed);
      Rational direct(BigInt(oracle::count_fixed(ind, ga_images)), BigInt(ind.degree()));
      REQUIRE(m.direct.has_value());
      CHECK(*m.direct == direct);
      CHECK(direct == m.value);
    }
    if (n == 1) {
      first_c = m.c_n;
    }
    if (n == 2) {
      CHECK(m.c_n <= first_c);
    }
  }
  auto other = build_chain(Presentation::orientable(1, 1), Rational(1, 2), std::vector<unsigned>{3}, 1,
                           ChainConfig{});
  auto ed4 = orientation_double_cover(4);
  CHECK_THROWS_AS(induced_gamma_a_measure(other, ed4, 1), PresentationMismatch);
}
