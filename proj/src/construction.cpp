#include "allostery/construction.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "allostery/random.hpp"

namespace allostery {

std::vector<RateStep> choose_rates(const Rational& t, std::span<const unsigned> primes,
                                   int depth) {
  if (t <= 0 || t >= 1) {
    throw DomainError("t must lie in (0,1)");
  }
  if (depth < 0) {
    throw DomainError("depth must be non-negative");
  }
  if (primes.size() < static_cast<std::size_t>(depth)) {
    throw DomainError("need one prime per level");
  }
  std::set<unsigned> seen;
  for (std::size_t i = 0; i < static_cast<std::size_t>(depth); ++i) {
    if (!is_prime(primes[i]) || !seen.insert(primes[i]).second) {
      throw DomainError("primes must be distinct primes");
    }
  }
  std::vector<RateStep> steps;
  Rational partial = 1;
  for (int n = 1; n <= depth; ++n) {
    const unsigned p = primes[static_cast<std::size_t>(n - 1)];
    const Rational ratio = t / partial;
    const Rational tail = Rational(1, BigInt(1) << (n + 2));
    bool found = false;
    for (int e = 1; e <= 256 && !found; ++e) {
      BigInt q = ipow(p, static_cast<unsigned>(e));
      BigInt fl = numerator_of(ratio) * q / denominator_of(ratio);
      Rational r(fl + 1, q);
      if (r < 1 && partial * r - t < tail) {
        partial *= r;
        steps.push_back({p, e, r, partial});
        found = true;
      }
    }
    if (!found) {
      throw DomainError("no admissible rate found");
    }
  }
  return steps;
}

std::vector<Point> admissible_degrees(unsigned p, const Rational& r, std::size_t gamma_length,
                                      int d_cap_exponent) {
  std::vector<Point> out;
  BigInt d = 1;
  for (int k = 1; k <= d_cap_exponent; ++k) {
    d *= p;
    if (d > BigInt(1) << 30) {
      break;
    }
    Rational rd = r * Rational(d);
    if (denominator_of(rd) != 1) {
      continue;
    }
    BigInt window = d - 1 - 2 * BigInt(gamma_length);
    if (window >= numerator_of(rd)) {
      out.push_back(static_cast<Point>(d));
    }
  }
  return out;
}

std::string image_digest(const PointedAction& act, const Word& w) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Point x = 0; x < act.degree(); ++x) {
    Point y = act.act(w, x);
    for (int b = 0; b < 4; ++b) {
      h ^= (y >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<Word> gamma_a_words(const Presentation& pres) {
  std::vector<Word> ws;
  for (Letter l : pres.gamma_a_generators()) {
    ws.push_back(Word{l});
  }
  return ws;
}

namespace {

nlohmann::json stage_json(const Presentation& pres, const StageRecord& s) {
  return {{"p", s.p},
          {"base_degree", s.base_degree},
          {"dimension", s.dimension},
          {"kills", s.kills},
          {"separation", s.separation.to_json(pres)}};
}

SeparationMap separation_from_json(const Presentation& pres, const nlohmann::json& j) {
  SeparationMap sm;
  sm.p = j.at("p").get<unsigned>();
  sm.rank = j.at("rank").get<std::size_t>();
  sm.dimension = j.at("dimension").get<std::size_t>();
  sm.seed = j.at("seed").get<std::uint64_t>();
  sm.attempt = j.at("attempt").get<unsigned>();
  sm.matrix = j.at("matrix").get<std::vector<FpVector>>();
  for (const auto& t : j.at("targets")) {
    sm.targets.push_back({t.at("point").get<Point>(), pres.parse(t.at("word").get<std::string>())});
    sm.images.push_back(t.at("image").get<FpVector>());
  }
  return sm;
}

}  // namespace

nlohmann::json SubgroupCertificate::to_json() const {
  nlohmann::json st = nlohmann::json::array();
  for (const auto& s : stages) {
    st.push_back(stage_json(pres, s));
  }
  return {{"pres", pres.to_json()},
          {"gamma", pres.format(gamma)},
          {"delta", pres.format(delta)},
          {"p", p},
          {"d", d},
          {"r", to_string(r)},
          {"E", E},
          {"seed", seed},
          {"stages", std::move(st)},
          {"degree", degree},
          {"witnesses",
           {{"gamma_image", gamma_image},
            {"index_exponent", index_exponent},
            {"fixed_count", fixed_count},
            {"claimed_fixed", to_string(r * Rational(degree))},
            {"delta_fixed", delta_fixed},
            {"delta_digest", delta_digest}}}};
}

SubgroupCertificate SubgroupCertificate::from_json(const nlohmann::json& j) {
  try {
    SubgroupCertificate c;
    c.pres = Presentation::from_json(j.at("pres"));
    c.gamma = c.pres.parse(j.at("gamma").get<std::string>());
    c.delta = c.pres.parse(j.at("delta").get<std::string>());
    c.p = j.at("p").get<unsigned>();
    c.d = j.at("d").get<Point>();
    c.r = parse_rational(j.at("r").get<std::string>());
    c.E = j.at("E").get<std::vector<Point>>();
    c.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& s : j.at("stages")) {
      StageRecord rec;
      rec.p = s.at("p").get<unsigned>();
      rec.base_degree = s.at("base_degree").get<Point>();
      rec.dimension = s.at("dimension").get<std::size_t>();
      rec.kills = s.at("kills").get<std::size_t>();
      rec.separation = separation_from_json(c.pres, s.at("separation"));
      c.stages.push_back(std::move(rec));
    }
    c.degree = j.at("degree").get<Point>();
    const auto& w = j.at("witnesses");
    c.gamma_image = w.at("gamma_image").get<Point>();
    c.index_exponent = w.at("index_exponent").get<int>();
    c.fixed_count = w.at("fixed_count").get<std::uint64_t>();
    c.delta_fixed = w.at("delta_fixed").get<std::uint64_t>();
    c.delta_digest = w.at("delta_digest").get<std::string>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("certificate JSON: ") + e.what());
  }
}

CertificateReport verify_certificate(const SubgroupCertificate& cert, const PointedAction& act) {
  auto fail = [](std::string prop, std::string detail) {
    return CertificateReport{false, std::move(prop), std::move(detail)};
  };
  if (!(act.presentation() == cert.pres)) {
    return fail("action", "presentation differs from the certificate");
  }
  auto rep = verify_action(act);
  if (!rep.ok) {
    return fail("action", rep.axiom + ": " + rep.detail);
  }
  const Point base = act.basepoint();
  // (i)
  Point g = act.act(cert.gamma, base);
  if (g == base) {
    return fail("i", "gamma fixes the basepoint");
  }
  if (g != cert.gamma_image) {
    return fail("i", "gamma sends the basepoint to " + std::to_string(g) + ", certificate says " +
                         std::to_string(cert.gamma_image));
  }
  // (ii)
  if (act.degree() != cert.degree) {
    return fail("ii", "degree " + std::to_string(act.degree()) + " differs from certificate " +
                          std::to_string(cert.degree));
  }
  int k = power_exponent(BigInt(act.degree()), cert.p);
  if (k < 1 || k != cert.index_exponent) {
    return fail("ii", "index " + std::to_string(act.degree()) + " is not p^" +
                          std::to_string(cert.index_exponent));
  }
  // (iii)
  auto gens = gamma_a_words(cert.pres);
  std::uint64_t fixed = count_fixed(act, gens);
  if (fixed != cert.fixed_count) {
    return fail("iii", "fixed count " + std::to_string(fixed) + " differs from certificate " +
                           std::to_string(cert.fixed_count));
  }
  if (BigInt(fixed) * denominator_of(cert.r) != numerator_of(cert.r) * BigInt(act.degree())) {
    return fail("iii", "fixed count " + std::to_string(fixed) + " is not r * index = " +
                           to_string(cert.r * Rational(act.degree())));
  }
  // (iv)
  std::vector<Word> dw{cert.delta};
  std::uint64_t dfix = count_fixed(act, dw);
  if (dfix != 0 || cert.delta_fixed != 0) {
    return fail("iv", "delta fixes " + std::to_string(dfix) + " points");
  }
  if (image_digest(act, cert.delta) != cert.delta_digest) {
    return fail("iv", "delta image digest mismatch");
  }
  return {};
}

namespace {

struct Attempt {
  PointedAction action;
  std::vector<StageRecord> stages;
};

void check_cover_degree(Point base, unsigned p, std::size_t rank, Point cap) {
  std::uint64_t degree = base;
  for (std::size_t i = 0; i < rank && degree <= cap; ++i) {
    degree *= p;
  }
  if (degree > cap) {
    throw DomainError("cover of rank " + std::to_string(rank) + " over degree " +
                      std::to_string(base) + " exceeds the degree cap");
  }
}

Attempt attempt_cover(const Presentation& pres, unsigned p, Point d, const std::vector<Point>& E,
                      const Word& gamma, const Word& delta, const LambdaConfig& config,
                      std::uint64_t seed) {
  const auto gens = gamma_a_words(pres);
  const SeparationConfig sep{config.rank_cap, config.retries};
  PointedAction base = cyclic_cover(pres, d);
  std::vector<bool> in_e(d, false);
  for (Point k : E) {
    in_e[k] = true;
  }
  std::vector<Loop> kills;
  std::vector<Loop> targets;
  for (Point k = 0; k < d; ++k) {
    for (const auto& s : gens) {
      (in_e[k] ? kills : targets).push_back({k, s});
    }
  }
  HomologyData hd = homology(base, p, kills);
  bool deferred = false;
  if (base.act(gamma, 0) == 0) {
    Loop t{0, gamma};
    if (hd.loop_class_sparse(t).empty()) {
      deferred = true;
    } else {
      targets.push_back(t);
    }
  }
  if (phi(pres, delta) % static_cast<long long>(d) == 0) {
    for (Point k = 0; k < d; ++k) {
      Loop t{k, delta};
      if (hd.loop_class_sparse(t).empty()) {
        deferred = true;
      } else {
        targets.push_back(t);
      }
    }
  }
  if (deferred && config.max_stages < 2) {
    throw TargetInvisible("gamma or delta has zero class in the first quotient", {0, gamma});
  }
  SeparationMap sm = search_separation(hd, targets, seed, sep);
  check_cover_degree(base.degree(), p, sm.rank, config.cover_degree_cap);
  Attempt out{cocycle_cover(base, hd, sm), {}};
  out.stages.push_back({p, d, hd.dimension(), kills.size(), std::move(sm)});

  for (int stage = 2; stage <= config.max_stages && deferred; ++stage) {
    const PointedAction& cur = out.action;
    if (cur.degree() > config.stage_degree_cap) {
      throw DomainError("stage " + std::to_string(stage) + " base degree " +
                        std::to_string(cur.degree()) + " exceeds the stage cap");
    }
    auto fixed_points = fix_all(cur, gens);
    std::vector<Loop> stage_kills;
    for (Point y : fixed_points) {
      for (const auto& s : gens) {
        stage_kills.push_back({y, s});
      }
    }
    std::vector<Loop> stage_targets;
    if (cur.act(gamma, cur.basepoint()) == cur.basepoint()) {
      stage_targets.push_back({cur.basepoint(), gamma});
    }
    for (Point y : fix_set(cur, delta)) {
      stage_targets.push_back({y, delta});
    }
    if (stage_targets.empty()) {
      break;
    }
    HomologyData hd2 = homology(cur, p, stage_kills);
    SeparationMap sm2 = search_separation(hd2, stage_targets, derive_seed(seed, 0x57a6e, stage), sep);
    check_cover_degree(cur.degree(), p, sm2.rank, config.cover_degree_cap);
    PointedAction next = cocycle_cover(cur, hd2, sm2);
    out.stages.push_back({p, cur.degree(), hd2.dimension(), stage_kills.size(), std::move(sm2)});
    out.action = std::move(next);
  }
  return out;
}

std::string describe_e(const std::vector<Point>& E) {
  if (E.empty()) {
    return "{}";
  }
  return "{" + std::to_string(E.front()) + ".." + std::to_string(E.back()) + "}";
}

}  // namespace

LambdaResult build_lambda(const Presentation& pres, unsigned p, const Rational& r,
                          const Word& gamma, const Word& delta, const LambdaConfig& config) {
  if (!pres.orientable()) {
    throw PresentationUnsupported("build_lambda needs an orientable presentation");
  }
  if (!is_prime(p)) {
    throw DomainError("p must be prime");
  }
  if (r <= 0 || r >= 1 || power_exponent(denominator_of(r), p) < 0) {
    throw DomainError("r must lie in (0,1) with a power of p as denominator");
  }
  if (dehn_is_trivial(pres, gamma).trivial) {
    throw DomainError("gamma must be nontrivial");
  }
  for (Letter l : delta) {
    if (!pres.is_gamma_b_letter(l)) {
      throw DomainError("delta must be a word over b_j, beta_j");
    }
  }
  if (boundary_closure_member(pres, delta)) {
    throw DomainError("delta lies in the normal closure of the amalgamated subgroup");
  }
  const std::size_t n = gamma.size();
  std::vector<std::string> diagnostics;
  auto degrees = admissible_degrees(p, r, n, config.d_cap_exponent);
  if (degrees.empty()) {
    diagnostics.push_back("no admissible d up to p^" + std::to_string(config.d_cap_exponent));
  }
  for (Point d : degrees) {
    const auto rd = static_cast<Point>(numerator_of(r * Rational(d)));
    const Point window = d - 1 - 2 * static_cast<Point>(n);
    const Point shifts = std::min<Point>(config.e_rotations, window - rd + 1);
    for (Point s = 0; s < shifts; ++s) {
      std::vector<Point> E;
      for (Point k = 0; k < rd; ++k) {
        E.push_back(static_cast<Point>(n) + 1 + s + k);
      }
      const std::uint64_t seed = derive_seed(config.seed, d, s);
      std::string where = "d=" + std::to_string(d) + " E=" + describe_e(E);
      try {
        Attempt at = attempt_cover(pres, p, d, E, gamma, delta, config, seed);
        PointedAction act = canonical_form(at.action);
        SubgroupCertificate cert;
        cert.pres = pres;
        cert.gamma = gamma;
        cert.delta = delta;
        cert.p = p;
        cert.d = d;
        cert.r = r;
        cert.E = E;
        cert.seed = config.seed;
        cert.stages = std::move(at.stages);
        cert.degree = act.degree();
        cert.gamma_image = act.act(gamma, act.basepoint());
        cert.index_exponent = power_exponent(BigInt(act.degree()), p);
        cert.fixed_count = count_fixed(act, gamma_a_words(pres));
        std::vector<Word> dw{delta};
        cert.delta_fixed = count_fixed(act, dw);
        cert.delta_digest = image_digest(act, delta);
        auto report = verify_certificate(cert, act);
        if (!report.ok) {
          diagnostics.push_back(where + ": property (" + report.property + ") " + report.detail);
          continue;
        }
        act.meta() = {{"component", "lambda"}, {"p", p}, {"d", d}, {"r", to_string(r)},
                      {"E", E}, {"seed", config.seed}, {"stages", cert.stages.size()}};
        return {std::move(act), std::move(cert), std::move(diagnostics)};
      } catch (const TargetInvisible& e) {
        diagnostics.push_back(where + ": " + e.what());
      } catch (const RankExhausted& e) {
        diagnostics.push_back(where + ": " + e.what());
      } catch (const DomainError& e) {
        diagnostics.push_back(where + ": " + e.what());
      }
    }
  }
  std::string msg = "no certified subgroup for gamma = " + pres.format(gamma) + ", p = " +
                    std::to_string(p) + ", r = " + to_string(r);
  for (const auto& d : diagnostics) {
    msg += "\n  " + d;
  }
  throw ConstructionExhausted(msg);
}

}  // namespace allostery
