#include <doctest.h>

#include <algorithm>

#include "allostery/covers.hpp"
#include "oracles.hpp"

using namespace allostery;

namespace {

Presentation genus2() { return Presentation::orientable(1, 1); }

std::size_t nonzeros(const FpVector& v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](Residue x) { return x != 0; }));
}

std::vector<PointedAction> battery() {
  auto pres = genus2();
  std::vector<PointedAction> out;
  for (Point d = 1; d <= 8; ++d) {
    out.push_back(cyclic_cover(pres, d));
  }
  std::vector<long long> shifts{1, 2, 0, 1};
  out.push_back(abelian_cover(pres, shifts, 5));
  out.push_back(product_intersection(cyclic_cover(pres, 2), cyclic_cover(pres, 3)));
  auto c2 = cyclic_cover(pres, 2);
  auto hd = homology(c2, 2, std::span<const Word>{});
  out.push_back(cocycle_cover(c2, hd, random_separation(hd, 1, 11)));
  out.push_back(cocycle_cover(c2, hd, random_separation(hd, 2, 12)));
  return out;
}

}  // namespace

TEST_CASE("cyclic covers") {
  auto pres = genus2();
  auto c3 = cyclic_cover(pres, 3);
  CHECK(c3.perm(2) == Permutation{1, 2, 0});
  CHECK(c3.perm(0) == Permutation{0, 1, 2});
  CHECK(c3.perm(1) == Permutation{0, 1, 2});
  CHECK(c3.perm(3) == Permutation{0, 1, 2});
  CHECK(verify_action(c3).ok);
  auto c1 = cyclic_cover(pres, 1);
  CHECK(c1.degree() == 1);
  auto c5 = cyclic_cover(pres, 5);
  std::vector<Word> gens{pres.parse("a1"), pres.parse("al1")};
  CHECK(oracle::count_fixed(c5, gens) == 5);
  std::vector<long long> a_shift{1, 0, 0, 0};
  CHECK(verify_action(abelian_cover(pres, a_shift, 3)).ok);
  CHECK_THROWS_AS(abelian_cover(pres, std::vector<long long>{1, 0}, 3), DomainError);
}

TEST_CASE("Schreier classes") {
  auto pres = genus2();
  for (Point d = 2; d <= 6; ++d) {
    auto c = cyclic_cover(pres, d);
    auto sd = schreier_data(c);
    // Free rank of the stabilizer's preimage: d * 4 - d + 1 edges.
    CHECK(sd.num_edges == d * 4 - (d - 1));
    auto bd = schreier_class(sd, pres.parse("b1").power(static_cast<int>(d)), 0, 5);
    CHECK(bd.end == 0);
    CHECK(nonzeros(bd.vector) == 1);
    auto hit = std::find(bd.vector.begin(), bd.vector.end(), Residue{1});
    REQUIRE(hit != bd.vector.end());
    auto column = static_cast<std::int32_t>(hit - bd.vector.begin());
    bool is_b_edge = false;
    for (Point v = 0; v < d; ++v) {
      is_b_edge = is_b_edge || sd.edge(v, 2) == column;
    }
    CHECK(is_b_edge);

    auto b = schreier_class(sd, pres.parse("b1"), 0, 5);
    CHECK(b.end == 1);
    CHECK(nonzeros(b.vector) == 0);
  }
  auto c3 = cyclic_cover(pres, 3);
  auto sd = schreier_data(c3);
  auto aa = schreier_class(sd, Word(std::vector<Letter>{1, -1}), 2, 3);
  CHECK(aa.end == 2);
  CHECK(nonzeros(aa.vector) == 0);
}

TEST_CASE("homology dimensions") {
  auto pres = genus2();
  auto c3 = cyclic_cover(pres, 3);
  auto hd = homology(c3, 3, std::span<const Word>{});
  CHECK(hd.dimension() == 8);
  CHECK(oracle::homology_dimension(c3, 3) == 8);

  std::vector<Word> kills{pres.parse("b1 a1 b1^-1"), pres.parse("b1 al1 b1^-1")};
  auto hk = homology(c3, 3, kills);
  CHECK(hk.dimension() == 6);
  CHECK(oracle::homology_dimension(c3, 3, {{0, kills[0]}, {0, kills[1]}}) == 6);

  auto one = cyclic_cover(pres, 1);
  CHECK(homology(one, 2, std::span<const Word>{}).dimension() == 4);
  CHECK(oracle::homology_dimension(one, 2) == 4);

  std::vector<Word> open{pres.parse("b1")};
  CHECK_THROWS_AS(homology(c3, 3, open), KillWordNotInSubgroup);
}

TEST_CASE("Euler characteristic of covers") {
  for (const auto& act : battery()) {
    REQUIRE(verify_action(act).ok);
    for (unsigned p : {2u, 3u, 5u}) {
      auto hd = homology(act, p, std::span<const Word>{});
      CHECK(hd.dimension() == 2 + 2 * act.degree());
      CHECK(hd.dimension() == oracle::homology_dimension(act, p));
    }
  }
}

TEST_CASE("kill loops match the oracle") {
  auto pres = genus2();
  auto c6 = cyclic_cover(pres, 6);
  std::vector<Loop> kills{{1, pres.parse("a1")}, {4, pres.parse("al1")}, {2, pres.parse("b1^6")}};
  auto hd = homology(c6, 5, kills);
  CHECK(hd.dimension() ==
        oracle::homology_dimension(c6, 5, {{1, kills[0].word}, {4, kills[1].word}, {2, kills[2].word}}));
  // Projection composed with inclusion of the span is zero.
  for (const auto& row : hd.kill_rows()) {
    CHECK(hd.echelon().project_sparse(row).empty());
  }
  for (const auto& row : hd.relator_rows()) {
    CHECK(hd.echelon().project_sparse(row).empty());
  }
}

TEST_CASE("separation search") {
  auto pres = genus2();
  auto c3 = cyclic_cover(pres, 3);
  std::vector<Word> kills{pres.parse("b1 a1 b1^-1"), pres.parse("b1 al1 b1^-1")};
  auto hd = homology(c3, 3, kills);
  std::vector<Word> targets{pres.parse("a1"), pres.parse("al1"), pres.parse("b1^2 a1 b1^-2"),
                            pres.parse("b1^2 al1 b1^-2")};
  auto sm = search_separation(hd, targets, 7);
  CHECK(sm.rank == 1);
  REQUIRE(sm.images.size() == 4);
  // Recompute each image from the class directly.
  for (std::size_t i = 0; i < targets.size(); ++i) {
    auto c = hd.loop_class({0, targets[i]});
    long long acc = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      acc += static_cast<long long>(sm.matrix[0][j]) * c[j];
    }
    CHECK(acc % 3 == sm.images[i][0]);
    CHECK(sm.images[i][0] != 0);
  }

  std::vector<Word> dead{pres.parse("b1 a1 b1^-1")};
  CHECK_THROWS_AS(search_separation(hd, dead, 7), TargetInvisible);

  auto empty = search_separation(hd, std::span<const Word>{}, 7);
  CHECK(empty.rank == 0);
}

TEST_CASE("cocycle covers") {
  auto pres = genus2();
  auto c3 = cyclic_cover(pres, 3);
  std::vector<Word> kills{pres.parse("b1 a1 b1^-1"), pres.parse("b1 al1 b1^-1")};
  auto hd = homology(c3, 3, kills);
  std::vector<Word> targets{pres.parse("a1"), pres.parse("al1"), pres.parse("b1^2 a1 b1^-2"),
                            pres.parse("b1^2 al1 b1^-2")};
  auto sm = search_separation(hd, targets, 7);
  auto cover = cocycle_cover(c3, hd, sm);
  CHECK(verify_action(cover).ok);
  CHECK(cover.degree() == 9);
  std::vector<Word> gens{pres.parse("a1"), pres.parse("al1")};
  auto fixed = fix_all(cover, gens);
  CHECK(fixed == std::vector<Point>{3, 4, 5});
  CHECK(oracle::count_fixed(cover, gens) * 3 == cover.degree());
  CHECK(fix_set(cover, pres.parse("b1")).empty());

  auto zero = search_separation(hd, std::span<const Word>{}, 7);
  auto same = cocycle_cover(c3, hd, zero);
  CHECK(same.perms() == c3.perms());

  for (const auto& act : battery()) {
    if (act.meta().value("component", "") == "cocycle") {
      CHECK(oracle::count_fixed(act, {pres.parse("b1")}) == 0);
    }
  }
}
