// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include "allostery/analysis.hpp"
#include "allostery/cli.hpp"
#include "allostery/covers.hpp"
#include "allostery/induction.hpp"
#include "allostery/random.hpp"
#include "oracles.hpp"

using namespace allostery;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Presentation genus2() { return Presentation::orientable(1, 1); }

const Chain& chain_half() {
  static const Chain chain = build_chain(genus2(), Rational(1, 2), std::vector<unsigned>{3, 5}, 2,
                                         ChainConfig{});
  return chain;
}

Outcome criterion1() {
  auto start = Clock::now();
  auto pres = genus2();
  LambdaConfig c;
  c.seed = 7;
  auto res = build_lambda(pres, 3, Rational(1, 3), pres.parse("a1"), pres.parse("b1"), c);
  double secs = seconds_since(start);
  const auto& act = res.action;
  Point index = act.degree();
  bool power = power_exponent(BigInt(index), 3) >= 1;
  auto fixed = oracle::count_fixed(act, gamma_a_words(pres));
  bool third = fixed * 3 == index;
  bool moves = oracle::apply(act, pres.parse("a1"), act.basepoint()) != act.basepoint();
  bool free = oracle::count_fixed(act, {pres.parse("b1")}) == 0;
  bool cert = verify_certificate(res.certificate, act).ok;
  std::ostringstream d;
  d << "index " << index << ", fixed " << fixed << ", gamma moves basepoint " << moves
    << ", Fix(delta) empty " << free << ", certificate " << cert << ", " << secs << " s";
  return {power && third && moves && free && cert && secs < 10, d.str()};
}

Outcome criterion2() {
  auto start = Clock::now();
  const auto& chain = chain_half();
  double secs = seconds_since(start);
  auto m = cylinder_measure(chain, gamma_a_words(chain.pres), {}, 2);
  const auto* top = chain.materialized(2);
  bool direct = top != nullptr &&
                Rational(BigInt(oracle::count_fixed(*top, gamma_a_words(chain.pres))),
                         BigInt(top->degree())) == m;
  Rational tail = m - Rational(1, 2);
  bool close = (tail < 0 ? -tail : tail) < Rational(1, 4);
  std::ostringstream d;
  d << "level-2 measure " << to_string(m) << ", degree " << chain.degree(2) << ", direct count "
    << direct << ", " << secs << " s";
  return {m == Rational(23, 45) && direct && close && chain.degree(2) < 1000000 && secs < 300,
          d.str()};
}

Outcome criterion3() {
  const auto& chain = chain_half();
  bool ok = true;
  std::ostringstream d;
  for (int k = 1; k <= 2; ++k) {
    const auto& delta = chain.levels[static_cast<std::size_t>(k - 1)].delta;
    for (int n = k; n <= chain.depth(); ++n) {
      auto f = fix_proportion(chain, delta, n);
      const auto* lvl = chain.materialized(n);
      bool zero = f == 0 && lvl != nullptr && oracle::count_fixed(*lvl, {delta}) == 0;
      ok = ok && zero;
      d << "delta" << k << "=" << chain.pres.format(delta) << " level " << n << ": " << to_string(f)
        << "; ";
    }
  }
  return {ok, d.str()};
}

Outcome criterion4() {
  auto chain = build_chain(genus2(), Rational(1, 2), std::vector<unsigned>{3, 5, 7}, 3, ChainConfig{});
  auto cert = urs_certificate(chain, 3, chain.depth());
  std::size_t nontrivial = 0;
  for (const auto& w : enumerate_ball(chain.pres, 3)) {
    nontrivial += dehn_is_trivial(chain.pres, w).trivial ? 0 : 1;
  }
  std::ostringstream d;
  d << "depth 3 (primes 3,5,7), " << cert.separated.size() << " of " << nontrivial
    << " nontrivial words separated, " << cert.failures.size() << " failures";
  return {cert.failures.empty() && cert.separated.size() == nontrivial, d.str()};
}

Outcome criterion5() {
  auto pres = genus2();
  std::vector<Point> ds{2, 3, 5, 7};
  bool ok = true;
  // Every subset of the coprime list.
  for (unsigned mask = 1; mask < 16; ++mask) {
    PointedAction acc = trivial_action(pres);
    Point expect = 1;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if ((mask >> i) & 1U) {
        acc = product_intersection(acc, cyclic_cover(pres, ds[i]));
        expect *= ds[i];
      }
    }
    ok = ok && acc.degree() == expect && oracle::transitive(acc) && verify_action(acc).ok;
  }
  for (Point d : ds) {
    auto same = product_intersection(cyclic_cover(pres, d), cyclic_cover(pres, d));
    ok = ok && same.degree() == d && oracle::orbit_size(same, same.basepoint()) == d;
  }
  return {ok, "all 15 coprime subsets multiply (degree 210 for the full set); repeated d gives degree d"};
}

Outcome criterion6() {
  auto third = build_chain(genus2(), Rational(1, 3), std::vector<unsigned>{3, 5}, 2, ChainConfig{});
  auto r = compare_chains(third, chain_half(), 2);
  bool tails = r.tail_s < Rational(1, 24) && r.tail_t < Rational(1, 24);
  std::ostringstream d;
  d << "level 2: measures " << to_string(r.measure_s) << " and " << to_string(r.measure_t)
    << ", tails " << to_string(r.tail_s) << " and " << to_string(r.tail_t) << ", gap "
    << to_string(r.gap);
  return {tails && r.gap > Rational(1, 12) && r.distinct, d.str()};
}

Outcome criterion7() {
  auto ed = orientation_double_cover(3);
  if (!verify_embedding(ed).ok) {
    return {false, "embedding rejected"};
  }
  const auto& chain = chain_half();
  auto ga = gamma_a_words(chain.pres);
  std::vector<Word> ga_images;
  for (const auto& w : ga) {
    ga_images.push_back(ed.images[static_cast<std::size_t>(generator_of(w[0]))]);
  }
  bool ok = true;
  std::ostringstream d;
  Rational c1;
  Rational c_last;
  for (int n = 1; n <= chain.depth(); ++n) {
    auto m = induced_gamma_a_measure(chain, ed, n);
    // Direct count of Gamma_A-fixed points on the induced action.
    auto ind = induce(*chain.materialized(n), ed);
    Rational direct(BigInt(oracle::count_fixed(ind, ga_images)), BigInt(ind.degree()));
    ok = ok && direct == (m.t_n + m.c_n) / 2 && m.value == direct;
    d << "level " << n << ": (" << to_string(m.t_n) << " + " << to_string(m.c_n)
      << ")/2 = " << to_string(direct) << "; ";
    if (n == 1) {
      c1 = m.c_n;
    }
    c_last = m.c_n;
  }
  return {ok && c_last <= c1, d.str()};
}

Outcome criterion8() {
  std::vector<PointedAction> all;
  for (Point n = 1; n <= 4; ++n) {
    for (auto& a : oracle::all_actions(genus2(), n)) {
      all.push_back(std::move(a));
    }
  }
  std::size_t exhaustive = all.size();
  auto pres = genus2();
  for (Point d = 5; d <= 8; ++d) {
    all.push_back(cyclic_cover(pres, d));
  }
  all.push_back(abelian_cover(pres, std::vector<long long>{1, 2, 0, 1}, 5));
  all.push_back(abelian_cover(pres, std::vector<long long>{1, 1, 1, 0}, 7));
  all.push_back(product_intersection(cyclic_cover(pres, 2), cyclic_cover(pres, 3)));
  for (const auto& base : {cyclic_cover(pres, 2), cyclic_cover(pres, 4)}) {
    auto hd = homology(base, 2, std::span<const Word>{});
    all.push_back(cocycle_cover(base, hd, random_separation(hd, 1, 3)));
  }
  {
    auto c1 = cyclic_cover(pres, 1);
    auto hd = homology(c1, 2, std::span<const Word>{});
    all.push_back(cocycle_cover(c1, hd, random_separation(hd, 3, 9)));
  }
  bool ok = true;
  std::size_t checked = 0;
  for (const auto& act : all) {
    if (act.degree() > 8 || !verify_action(act).ok) {
      continue;
    }
    for (unsigned p : {2u, 3u}) {
      auto dim = homology(act, p, std::span<const Word>{}).dimension();
      ok = ok && dim == 2 + 2 * act.degree() && dim == oracle::homology_dimension(act, p);
    }
    ++checked;
  }
  std::ostringstream d;
  d << checked << " actions (" << exhaustive << " exhaustive of degree <= 4), p = 2 and 3";
  return {ok && checked > exhaustive, d.str()};
}

Outcome criterion9() {
  auto pres = genus2();
  std::vector<PointedAction> battery;
  for (Point d = 1; d <= 6; ++d) {
    battery.push_back(cyclic_cover(pres, d));
  }
  auto c3 = cyclic_cover(pres, 3);
  auto hd = homology(c3, 3, std::span<const Word>{});
  battery.push_back(cocycle_cover(c3, hd, random_separation(hd, 2, 4)));
  for (const auto& a : oracle::all_actions(pres, 3)) {
    battery.push_back(a);
  }
  battery.push_back(*chain_half().materialized(1));
  std::vector<std::vector<std::vector<Point>>> inverses;
  for (const auto& a : battery) {
    inverses.push_back(oracle::inverse_perms(a));
  }

  Rng rng(derive_seed(2024, 9));
  auto random_word = [&](std::size_t len) {
    std::vector<Letter> letters;
    for (std::size_t i = 0; i < len; ++i) {
      auto g = static_cast<int>(rng.below(static_cast<std::uint64_t>(pres.num_generators())));
      letters.push_back(rng.below(2) == 0 ? positive_letter(g) : -positive_letter(g));
    }
    return Word(std::span<const Letter>(letters));
  };
  std::size_t trivial = 0;
  std::size_t nontrivial = 0;
  bool ok = true;
  for (int i = 0; i < 1000; ++i) {
    Word w;
    if (i % 2 == 0) {
      // Product of conjugated relators.
      int k = 1 + static_cast<int>(rng.below(3));
      for (int j = 0; j < k; ++j) {
        Word r = rng.below(2) == 0 ? pres.relator() : pres.relator().inverse();
        w = w * r.conjugated_by(random_word(rng.below(5)));
      }
    } else {
      w = random_word(1 + rng.below(12));
    }
    bool dehn_trivial = dehn_is_trivial(pres, w).trivial;
    bool moves = false;
    for (std::size_t a = 0; a < battery.size() && !moves; ++a) {
      for (Point x = 0; x < battery[a].degree() && !moves; ++x) {
        moves = oracle::apply(battery[a], inverses[a], w, x) != x;
      }
    }
    if (dehn_trivial) {
      ++trivial;
      ok = ok && !moves;
    }
    if (moves) {
      ++nontrivial;
      ok = ok && !dehn_trivial;
    }
    if (i % 2 == 0) {
      ok = ok && dehn_trivial;
    }
  }
  std::ostringstream d;
  d << "1000 words on " << battery.size() << " actions: " << trivial << " Dehn-trivial, " << nontrivial
    << " acting nontrivially";
  return {ok, d.str()};
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream f(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    files[e.path().filename().string()] = ss.str();
  }
  return files;
}

Outcome criterion10() {
  auto dir = fs::temp_directory_path() / "allostery_acceptance_determinism";
  std::vector<std::string> args{"allostery", "build", "--genus", "2", "--t", "1/2", "--primes", "3,5",
                                "--depth", "2", "--seed", "7", "--out", dir.string()};
  std::ostringstream out;
  std::ostringstream err;
  fs::remove_all(dir);
  int first_code = run_cli(args, out, err);
  auto first = read_dir(dir);
  fs::remove_all(dir);
  int second_code = run_cli(args, out, err);
  auto second = read_dir(dir);
  fs::remove_all(dir);
  bool same = first_code == 0 && second_code == 0 && !first.empty() && first == second;
  std::ostringstream d;
  d << first.size() << " files compared byte for byte";
  return {same, d.str()};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 single-level certificate", criterion1},
      {"2 Gamma_A measure at depth 2", criterion2},
      {"3 delta fixes nothing", criterion3},
      {"4 URS triviality, L = 3", criterion4},
      {"5 coprime products", criterion5},
      {"6 distinct IRS evidence", criterion6},
      {"7 induced measure identity", criterion7},
      {"8 Euler characteristic", criterion8},
      {"9 Dehn soundness", criterion9},
      {"10 determinism", criterion10},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << name << ": " << o.detail << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
