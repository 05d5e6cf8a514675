#include <filesystem>
#include <fstream>
#include <set>

#include "allostery/construction.hpp"
#include "allostery/random.hpp"

namespace allostery {

namespace fs = std::filesystem;

BigInt Chain::degree(int level) const {
  return level == 0 ? BigInt(1) : levels.at(static_cast<std::size_t>(level - 1)).degree;
}

const PointedAction* Chain::materialized(int level) const {
  if (level == 0) {
    return nullptr;
  }
  const auto& l = levels.at(static_cast<std::size_t>(level - 1));
  return l.product ? &*l.product : nullptr;
}

std::vector<const PointedAction*> Chain::components(int level) const {
  if (level < 0 || level > depth()) {
    throw DomainError("level outside the chain");
  }
  std::vector<const PointedAction*> out;
  for (int i = 0; i < level; ++i) {
    out.push_back(&levels[static_cast<std::size_t>(i)].lambda);
  }
  return out;
}

bool Chain::moves_basepoint(const Word& w, int level) const {
  for (const auto* c : components(level)) {
    if (c->act(w, c->basepoint()) != c->basepoint()) {
      return true;
    }
  }
  return false;
}

namespace {

std::vector<Word> delta_candidates(const Presentation& pres, int max_length) {
  std::vector<int> gens;
  for (Letter l : pres.gamma_b_generators()) {
    gens.push_back(generator_of(l));
  }
  WordEnumerator en(pres, max_length, false, gens);
  std::vector<Word> out;
  while (auto w = en.next()) {
    if (!boundary_closure_member(pres, *w)) {
      out.push_back(*w);
    }
  }
  return out;
}

void attach_product(Chain& chain, ChainLevel& level, int n) {
  if (level.degree > chain.config.materialize_cap) {
    return;
  }
  if (n == 1) {
    level.product = level.lambda;
    level.product->meta() = {{"component", "level"}, {"level", 1}};
    return;
  }
  const PointedAction* prev = chain.materialized(n - 1);
  if (prev == nullptr) {
    return;
  }
  PointedAction prod = product_intersection(*prev, level.lambda);
  if (BigInt(prod.degree()) != level.degree) {
    throw DomainError("level " + std::to_string(n) + " product has degree " +
                      std::to_string(prod.degree()) + ", expected the full product");
  }
  quotient_map(prod, *prev);
  prod.meta() = {{"component", "level"}, {"level", n}};
  level.product = std::move(prod);
}

}  // namespace

Chain build_chain(const Presentation& pres, const Rational& t, std::span<const unsigned> primes,
                  int depth, const ChainConfig& config) {
  Chain chain;
  chain.pres = pres;
  chain.t = t;
  chain.primes.assign(primes.begin(), primes.end());
  chain.config = config;
  auto rates = choose_rates(t, primes, depth);
  auto deltas = delta_candidates(pres, config.delta_length);
  for (int n = 1; n <= depth; ++n) {
    const auto& step = rates[static_cast<std::size_t>(n - 1)];
    if (static_cast<std::size_t>(n) > deltas.size()) {
      throw ConstructionExhausted("level " + std::to_string(n) + ": delta enumeration exhausted");
    }
    ChainLevel level;
    level.prime = step.prime;
    level.exponent = step.exponent;
    level.rate = step.rate;
    level.partial = step.partial;
    level.delta = deltas[static_cast<std::size_t>(n - 1)];
    LambdaConfig lc = config.lambda;
    lc.seed = derive_seed(config.lambda.seed, static_cast<std::uint64_t>(n));

    std::optional<LambdaResult> built;
    WordEnumerator candidates(pres, config.gamma_length, true);
    while (!built) {
      auto w = candidates.next();
      if (!w) {
        break;
      }
      if (chain.moves_basepoint(*w, n - 1)) {
        continue;
      }
      try {
        built = build_lambda(pres, step.prime, step.rate, *w, level.delta, lc);
        level.gamma = *w;
      } catch (const ConstructionExhausted&) {
        level.skipped.push_back(pres.format(*w));
      }
    }
    if (!built) {
      // Every short word is already separated; any nontrivial word serves.
      Word fallback{pres.letter(GeneratorKind::a, 1)};
      try {
        built = build_lambda(pres, step.prime, step.rate, fallback, level.delta, lc);
        level.gamma = fallback;
      } catch (const ConstructionExhausted& e) {
        throw ConstructionExhausted("level " + std::to_string(n) + ": " + e.what());
      }
    }
    level.lambda = std::move(built->action);
    level.certificate = std::move(built->certificate);
    level.degree = chain.degree(n - 1) * BigInt(level.lambda.degree());
    chain.levels.push_back(std::move(level));
    attach_product(chain, chain.levels.back(), n);
  }
  return chain;
}

ChainReport verify_chain(const Chain& chain) {
  auto fail = [](int level, std::string what, std::string detail) {
    return ChainReport{false, level, std::move(what), std::move(detail)};
  };
  std::set<unsigned> primes;
  Rational partial = 1;
  BigInt degree = 1;
  for (int n = 1; n <= chain.depth(); ++n) {
    const auto& l = chain.levels[static_cast<std::size_t>(n - 1)];
    if (!primes.insert(l.prime).second) {
      return fail(n, "primes", "prime " + std::to_string(l.prime) + " repeats");
    }
    if (!(l.lambda.presentation() == chain.pres)) {
      return fail(n, "presentation", "component presentation differs");
    }
    auto cert = verify_certificate(l.certificate, l.lambda);
    if (!cert.ok) {
      return fail(n, "certificate (" + cert.property + ")", cert.detail);
    }
    if (l.certificate.p != l.prime || l.certificate.r != l.rate) {
      return fail(n, "certificate", "certificate p or r differs from the level");
    }
    if (l.rate <= 0 || l.rate >= 1 ||
        power_exponent(denominator_of(l.rate), l.prime) < 0) {
      return fail(n, "rate", "rate " + to_string(l.rate) + " is not in (0,1) cap Z[1/p]");
    }
    partial *= l.rate;
    if (partial != l.partial) {
      return fail(n, "rate", "partial product mismatch");
    }
    if (partial < chain.t || partial - chain.t >= Rational(1, BigInt(1) << n)) {
      return fail(n, "rate", "t_n - t not in [0, 2^-n)");
    }
    degree *= l.lambda.degree();
    if (degree != l.degree) {
      return fail(n, "degree", "level degree is not the product of component degrees");
    }
    if (l.product) {
      auto rep = verify_action(*l.product);
      if (!rep.ok) {
        return fail(n, "product", rep.axiom + ": " + rep.detail);
      }
      if (BigInt(l.product->degree()) != degree) {
        return fail(n, "product", "materialized degree differs");
      }
      try {
        quotient_map(*l.product, l.lambda);
        if (const auto* prev = chain.materialized(n - 1)) {
          quotient_map(*l.product, *prev);
        }
      } catch (const NotAQuotient& e) {
        return fail(n, "quotient", e.what());
      }
    }
  }
  return {};
}

nlohmann::json config_to_json(const ChainConfig& c) {
  return {{"d_cap_exponent", c.lambda.d_cap_exponent},
          {"rank_cap", c.lambda.rank_cap},
          {"retries", c.lambda.retries},
          {"e_rotations", c.lambda.e_rotations},
          {"max_stages", c.lambda.max_stages},
          {"stage_degree_cap", c.lambda.stage_degree_cap},
          {"cover_degree_cap", c.lambda.cover_degree_cap},
          {"seed", c.lambda.seed},
          {"gamma_length", c.gamma_length},
          {"delta_length", c.delta_length},
          {"materialize_cap", c.materialize_cap}};
}

ChainConfig config_from_json(const nlohmann::json& j) {
  ChainConfig c;
  c.lambda.d_cap_exponent = j.value("d_cap_exponent", c.lambda.d_cap_exponent);
  c.lambda.rank_cap = j.value("rank_cap", c.lambda.rank_cap);
  c.lambda.retries = j.value("retries", c.lambda.retries);
  c.lambda.e_rotations = j.value("e_rotations", c.lambda.e_rotations);
  c.lambda.max_stages = j.value("max_stages", c.lambda.max_stages);
  c.lambda.stage_degree_cap = j.value("stage_degree_cap", c.lambda.stage_degree_cap);
  c.lambda.cover_degree_cap = j.value("cover_degree_cap", c.lambda.cover_degree_cap);
  c.lambda.seed = j.value("seed", c.lambda.seed);
  c.gamma_length = j.value("gamma_length", c.gamma_length);
  c.delta_length = j.value("delta_length", c.delta_length);
  c.materialize_cap = j.value("materialize_cap", c.materialize_cap);
  return c;
}

std::string save_chain(const Chain& chain, const std::string& dir, const nlohmann::json& run) {
  fs::create_directories(dir);
  nlohmann::json levels = nlohmann::json::array();
  for (int n = 1; n <= chain.depth(); ++n) {
    const auto& l = chain.levels[static_cast<std::size_t>(n - 1)];
    std::string lambda_file = "lambda_" + std::to_string(n) + ".json";
    save_action((fs::path(dir) / lambda_file).string(), l.lambda);
    nlohmann::json product = nullptr;
    if (l.product) {
      std::string f = "level_" + std::to_string(n) + ".json";
      save_action((fs::path(dir) / f).string(), *l.product);
      product = f;
    }
    levels.push_back({{"level", n},
                      {"prime", l.prime},
                      {"exponent", l.exponent},
                      {"rate", to_string(l.rate)},
                      {"partial", to_string(l.partial)},
                      {"gamma", chain.pres.format(l.gamma)},
                      {"delta", chain.pres.format(l.delta)},
                      {"skipped", l.skipped},
                      {"degree", l.degree.str()},
                      {"cert", l.certificate.to_json()},
                      {"action", lambda_file},
                      {"product", product}});
  }
  nlohmann::json manifest = {{"pres", chain.pres.to_json()},
                             {"t", to_string(chain.t)},
                             {"primes", chain.primes},
                             {"depth", chain.depth()},
                             {"config", config_to_json(chain.config)},
                             {"run", run},
                             {"levels", std::move(levels)}};
  auto path = (fs::path(dir) / "manifest.json").string();
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write " + path);
  }
  out << manifest.dump(2) << '\n';
  return path;
}

Chain load_chain(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) {
    throw IoError("cannot open manifest " + manifest_path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest " + manifest_path + ": " + e.what());
  }
  const fs::path dir = fs::path(manifest_path).parent_path();
  try {
    Chain chain;
    chain.pres = Presentation::from_json(j.at("pres"));
    chain.t = parse_rational(j.at("t").get<std::string>());
    chain.primes = j.at("primes").get<std::vector<unsigned>>();
    chain.config = config_from_json(j.at("config"));
    for (const auto& lj : j.at("levels")) {
      ChainLevel l;
      l.prime = lj.at("prime").get<unsigned>();
      l.exponent = lj.at("exponent").get<int>();
      l.rate = parse_rational(lj.at("rate").get<std::string>());
      l.partial = parse_rational(lj.at("partial").get<std::string>());
      l.gamma = chain.pres.parse(lj.at("gamma").get<std::string>());
      l.delta = chain.pres.parse(lj.at("delta").get<std::string>());
      l.skipped = lj.at("skipped").get<std::vector<std::string>>();
      l.degree = BigInt(lj.at("degree").get<std::string>());
      l.certificate = SubgroupCertificate::from_json(lj.at("cert"));
      l.lambda = load_action((dir / lj.at("action").get<std::string>()).string());
      if (!lj.at("product").is_null()) {
        l.product = load_action((dir / lj.at("product").get<std::string>()).string());
      }
      chain.levels.push_back(std::move(l));
    }
    return chain;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest " + manifest_path + ": " + e.what());
  }
}

}  // namespace allostery
