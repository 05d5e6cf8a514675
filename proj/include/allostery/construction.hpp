#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "allostery/actions.hpp"
#include "allostery/covers.hpp"
#include "allostery/rational.hpp"

namespace allostery {

struct RateStep {
  unsigned prime;
  int exponent;
  Rational rate;     // r_n in (0,1) with denominator prime^exponent
  Rational partial;  // t_n = r_1 ... r_n
};

// Greedy p-adic rates: r_n = (floor((t / t_{n-1}) p^e) + 1) / p^e with the
// smallest e giving r_n < 1 and t_n - t < 2^-(n+2). Then t < t_n and the
// partial products decrease to t.
std::vector<RateStep> choose_rates(const Rational& t, std::span<const unsigned> primes,
                                   int depth);

struct LambdaConfig {
  int d_cap_exponent = 5;  // d ranges over p, p^2, ..., p^d_cap_exponent
  std::size_t rank_cap = 8;
  unsigned retries = 32;
  unsigned e_rotations = 4;
  // Further homology stages over the first cocycle cover, used when gamma
  // or delta is invisible in the first quotient.
  int max_stages = 2;
  Point stage_degree_cap = 4096;
  // Largest degree of any cocycle cover built during the search.
  Point cover_degree_cap = Point{1} << 22;
  std::uint64_t seed = 7;
};

struct StageRecord {
  unsigned p = 0;
  Point base_degree = 0;
  std::size_t dimension = 0;
  std::size_t kills = 0;
  SeparationMap separation;
};

// Witnesses for a subgroup Lambda (the basepoint stabilizer of `degree`
// points): (i) gamma moves the basepoint, (ii) the index is a power of p,
// (iii) exactly r * index points are fixed by every a_i, alpha_i,
// (iv) delta fixes no point.
struct SubgroupCertificate {
  Presentation pres = Presentation::orientable(1, 1);
  Word gamma;
  Word delta;
  unsigned p = 0;
  Point d = 0;
  Rational r;
  std::vector<Point> E;
  std::uint64_t seed = 0;
  std::vector<StageRecord> stages;

  Point degree = 0;
  Point gamma_image = 0;        // (i)
  int index_exponent = 0;       // (ii)
  std::uint64_t fixed_count = 0;  // (iii)
  std::uint64_t delta_fixed = 0;  // (iv)
  std::string delta_digest;       // (iv) FNV-1a of delta's image array

  nlohmann::json to_json() const;
  static SubgroupCertificate from_json(const nlohmann::json& j);
};

struct CertificateReport {
  bool ok = true;
  std::string property;  // "action", "i", "ii", "iii" or "iv"
  std::string detail;
};

// Recomputes every property from the action table alone.
CertificateReport verify_certificate(const SubgroupCertificate& cert, const PointedAction& act);

std::string image_digest(const PointedAction& act, const Word& w);

// The one-letter words a_i, alpha_i generating Gamma_A.
std::vector<Word> gamma_a_words(const Presentation& pres);

struct LambdaResult {
  PointedAction action;
  SubgroupCertificate certificate;
  std::vector<std::string> diagnostics;  // failed (d, E) attempts
};

// Throws ConstructionExhausted, carrying the diagnostics, when every
// (d, E, stage) combination within the caps fails.
LambdaResult build_lambda(const Presentation& pres, unsigned p, const Rational& r,
                          const Word& gamma, const Word& delta, const LambdaConfig& config);

// Admissible d = p^k <= p^d_cap_exponent with r d integral and
// d - 1 - 2|gamma| >= r d.
std::vector<Point> admissible_degrees(unsigned p, const Rational& r, std::size_t gamma_length,
                                      int d_cap_exponent);

struct ChainConfig {
  LambdaConfig lambda;
  int gamma_length = 4;
  int delta_length = 4;
  Point materialize_cap = 1000000;
};

struct ChainLevel {
  unsigned prime = 0;
  int exponent = 0;
  Rational rate;
  Rational partial;
  Word gamma;
  Word delta;
  std::vector<std::string> skipped;  // gamma candidates whose build failed
  PointedAction lambda = trivial_action(Presentation::orientable(1, 1));
  SubgroupCertificate certificate;
  BigInt degree;                        // prod of component degrees
  std::optional<PointedAction> product;  // Gamma_n when materialized
};

// Gamma_n = Lambda_1 cap ... cap Lambda_n. Component degrees are powers of
// distinct primes, so Gamma_n acts on the full product of the components
// and is stored implicitly unless its degree is below materialize_cap.
struct Chain {
  Presentation pres = Presentation::orientable(1, 1);
  Rational t;
  std::vector<unsigned> primes;
  ChainConfig config;
  std::vector<ChainLevel> levels;  // levels[n - 1] is level n

  int depth() const { return static_cast<int>(levels.size()); }
  BigInt degree(int level) const;
  // Gamma_n when available; level 0 gives nullptr (use the trivial action).
  const PointedAction* materialized(int level) const;
  bool moves_basepoint(const Word& w, int level) const;
  std::vector<const PointedAction*> components(int level) const;
};

Chain build_chain(const Presentation& pres, const Rational& t, std::span<const unsigned> primes,
                  int depth, const ChainConfig& config);

struct ChainReport {
  bool ok = true;
  int level = 0;
  std::string what;
  std::string detail;
};

// Certificates, component actions, products and quotient maps, from the
// stored tables only.
ChainReport verify_chain(const Chain& chain);

nlohmann::json config_to_json(const ChainConfig& c);
ChainConfig config_from_json(const nlohmann::json& j);

// Writes manifest.json plus one action file per component and per
// materialized level into `dir`; returns the manifest path. `run` is echoed
// verbatim under "run".
std::string save_chain(const Chain& chain, const std::string& dir,
                       const nlohmann::json& run = nlohmann::json::object());
Chain load_chain(const std::string& manifest_path);

}  // namespace allostery
