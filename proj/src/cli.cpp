#include "allostery/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "allostery/analysis.hpp"
#include "allostery/construction.hpp"
#include "allostery/induction.hpp"

namespace allostery {

namespace {

namespace fs = std::filesystem;

Presentation orientable_of_genus(int genus) {
  if (genus < 2) {
    throw DomainError("orientable genus must be at least 2");
  }
  return Presentation::orientable(genus / 2, genus - genus / 2);
}

std::string trim(std::string s) {
  auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) {
    return {};
  }
  auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

// "gammaA", or comma-separated words ("1" or an empty item is the empty word).
std::vector<Word> parse_word_set(const Presentation& pres, const std::string& spec) {
  std::string s = trim(spec);
  if (s.empty()) {
    return {};
  }
  if (s == "gammaA") {
    return gamma_a_words(pres);
  }
  std::vector<Word> words;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    words.push_back(pres.parse(item));
  }
  if (s.back() == ',') {
    words.emplace_back();
  }
  return words;
}

// "a..b", or comma-separated levels; empty means 0..depth.
std::vector<int> parse_levels(const std::string& spec, int depth) {
  std::string s = trim(spec);
  std::vector<int> levels;
  if (s.empty()) {
    for (int n = 0; n <= depth; ++n) {
      levels.push_back(n);
    }
    return levels;
  }
  try {
    if (auto dots = s.find(".."); dots != std::string::npos) {
      int lo = std::stoi(s.substr(0, dots));
      int hi = std::stoi(s.substr(dots + 2));
      for (int n = lo; n <= hi; ++n) {
        levels.push_back(n);
      }
      return levels;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      levels.push_back(std::stoi(item));
    }
  } catch (const std::logic_error&) {
    throw ParseError("bad level list '" + spec + "'");
  }
  return levels;
}

// Word-set argument as a CSV-safe identifier: words separated by '|'.
std::string set_id(const std::string& spec) {
  std::string s = trim(spec);
  for (char& c : s) {
    if (c == ',') {
      c = '|';
    }
  }
  return s;
}

std::string float_string(const Rational& q) {
  std::ostringstream os;
  os << std::setprecision(12) << q.convert_to<double>();
  return os.str();
}

struct BuildOptions {
  int genus = 2;
  std::string t;
  std::vector<unsigned> primes;
  int depth = 0;
  std::uint64_t seed = 7;
  int d_cap_exponent = 5;
  std::size_t rank_cap = 8;
  unsigned retries = 32;
  int gamma_length = 4;
  int delta_length = 4;
  Point materialize_cap = 1000000;
  std::string out = "chain";
};

int cmd_build(const BuildOptions& o, std::ostream& out) {
  auto pres = orientable_of_genus(o.genus);
  Rational t = parse_rational(o.t);
  ChainConfig config;
  config.lambda.seed = o.seed;
  config.lambda.d_cap_exponent = o.d_cap_exponent;
  config.lambda.rank_cap = o.rank_cap;
  config.lambda.retries = o.retries;
  config.gamma_length = o.gamma_length;
  config.delta_length = o.delta_length;
  config.materialize_cap = o.materialize_cap;
  auto chain = build_chain(pres, t, o.primes, o.depth, config);
  nlohmann::json run = {{"command", "build"},
                        {"genus", o.genus},
                        {"t", o.t},
                        {"primes", o.primes},
                        {"depth", o.depth},
                        {"seed", o.seed},
                        {"d_cap_exponent", o.d_cap_exponent},
                        {"rank_cap", o.rank_cap},
                        {"retries", o.retries},
                        {"gamma_length", o.gamma_length},
                        {"delta_length", o.delta_length},
                        {"materialize_cap", o.materialize_cap},
                        {"out", o.out}};
  auto path = save_chain(chain, o.out, run);
  auto report = verify_chain(load_chain(path));
  if (!report.ok) {
    out << "FAIL level " << report.level << ' ' << report.what << ": " << report.detail << '\n';
    return kExitVerification;
  }
  out << "manifest " << path << '\n';
  for (const auto& l : chain.levels) {
    out << "level " << &l - chain.levels.data() + 1 << " prime " << l.prime << " rate "
        << to_string(l.rate) << " partial " << to_string(l.partial) << " degree " << l.degree
        << '\n';
  }
  return kExitOk;
}

int cmd_verify(const std::string& manifest, std::ostream& out) {
  auto chain = load_chain(manifest);
  auto report = verify_chain(chain);
  if (!report.ok) {
    out << "FAIL level " << report.level << ' ' << report.what << ": " << report.detail << '\n';
    return kExitVerification;
  }
  out << "ok depth " << chain.depth() << '\n';
  return kExitOk;
}

int cmd_measure(const std::string& manifest, const std::string& fixed_spec,
                const std::string& moved_spec, const std::string& level_spec, std::ostream& out) {
  auto chain = load_chain(manifest);
  auto fixed = parse_word_set(chain.pres, fixed_spec);
  auto moved = parse_word_set(chain.pres, moved_spec);
  auto levels = parse_levels(level_spec, chain.depth());
  std::string id = "in=" + set_id(fixed_spec) + ";out=" + set_id(moved_spec);
  out << "level,degree,wordset,numerator,denominator,float\n";
  for (int n : levels) {
    auto m = cylinder_measure(chain, fixed, moved, n);
    out << n << ',' << chain.degree(n) << ',' << id << ',' << numerator_of(m) << ','
        << denominator_of(m) << ',' << float_string(m) << '\n';
  }
  return kExitOk;
}

int cmd_compare(const std::string& manifest_s, const std::string& manifest_t, int level,
                std::ostream& out) {
  auto s = load_chain(manifest_s);
  auto t = load_chain(manifest_t);
  out << compare_chains(s, t, level).to_json().dump(2) << '\n';
  return kExitOk;
}

int cmd_induce(const std::string& manifest, int genus_prime, std::string out_dir,
               std::ostream& out) {
  auto chain = load_chain(manifest);
  auto ed = orientation_double_cover(genus_prime);
  if (auto report = verify_embedding(ed); !report.ok) {
    out << "FAIL embedding (" << report.check << "): " << report.detail << '\n';
    return kExitVerification;
  }
  if (out_dir.empty()) {
    out_dir = (fs::path(manifest).parent_path() / "induced").string();
  }
  fs::create_directories(out_dir);
  nlohmann::json levels = nlohmann::json::array();
  for (int n = 0; n <= chain.depth(); ++n) {
    auto m = induced_gamma_a_measure(chain, ed, n);
    nlohmann::json file = nullptr;
    if (n > 0 && chain.materialized(n) != nullptr) {
      std::string f = "induced_" + std::to_string(n) + ".json";
      save_action((fs::path(out_dir) / f).string(), induce(*chain.materialized(n), ed));
      file = f;
    }
    levels.push_back({{"level", n},
                      {"t_n", to_string(m.t_n)},
                      {"c_n", to_string(m.c_n)},
                      {"measure", to_string(m.value)},
                      {"direct", m.direct ? nlohmann::json(to_string(*m.direct)) : nullptr},
                      {"action", file}});
  }
  nlohmann::json j = {{"source", fs::path(manifest).filename().string()},
                      {"genus_prime", genus_prime},
                      {"embedding", ed.to_json()},
                      {"levels", std::move(levels)}};
  auto path = (fs::path(out_dir) / "induced.json").string();
  std::ofstream f(path);
  if (!f) {
    throw IoError("cannot write " + path);
  }
  f << j.dump(2) << '\n';
  out << "induced " << path << '\n';
  return kExitOk;
}

int cmd_urs(const std::string& manifest, int length, int max_level, std::ostream& out) {
  auto chain = load_chain(manifest);
  if (max_level < 0) {
    max_level = chain.depth();
  }
  auto cert = urs_certificate(chain, length, max_level);
  out << cert.to_json(chain.pres).dump(2) << '\n';
  return cert.failures.empty() ? kExitOk : kExitVerification;
}

int cmd_dehn(int genus, bool nonorientable, const std::string& word, std::ostream& out) {
  auto pres = nonorientable ? Presentation::nonorientable(genus) : orientable_of_genus(genus);
  auto r = dehn_is_trivial(pres, pres.parse(word));
  if (r.trivial) {
    out << "trivial\n";
  } else {
    out << "nontrivial " << pres.format(r.witness) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite levels of allosteric actions of surface groups"};
  app.require_subcommand(1);

  BuildOptions build;
  auto* b = app.add_subcommand("build", "Build and certify a chain");
  b->add_option("--genus", build.genus, "Orientable genus");
  b->add_option("--t", build.t, "Target measure p/q in (0,1)")->required();
  b->add_option("--primes", build.primes, "Distinct primes, one per level")
      ->required()
      ->delimiter(',');
  b->add_option("--depth", build.depth, "Number of levels")->required();
  b->add_option("--seed", build.seed, "Seed");
  b->add_option("--d-cap-exponent", build.d_cap_exponent, "Largest exponent k of d = p^k");
  b->add_option("--rank-cap", build.rank_cap, "Largest separation rank");
  b->add_option("--retries", build.retries, "Random matrices per rank");
  b->add_option("--gamma-length", build.gamma_length, "Length bound of gamma candidates");
  b->add_option("--delta-length", build.delta_length, "Length bound of delta candidates");
  b->add_option("--materialize-cap", build.materialize_cap, "Largest stored level degree");
  b->add_option("--out", build.out, "Output directory");

  std::string manifest;
  auto* v = app.add_subcommand("verify", "Re-verify a chain from its files");
  v->add_option("manifest", manifest)->required();

  std::string fixed_spec = "gammaA";
  std::string moved_spec;
  std::string level_spec;
  auto* m = app.add_subcommand("measure", "Cylinder measures as CSV");
  m->add_option("manifest", manifest)->required();
  m->add_option("--fixed", fixed_spec, "Words required to fix the point");
  m->add_option("--moved", moved_spec, "Words required to move the point");
  m->add_option("--levels", level_spec, "Levels, as a..b or a comma list");

  std::string manifest_t;
  int level = 0;
  auto* c = app.add_subcommand("compare", "Compare the cylinder measures of two chains");
  c->add_option("manifest_s", manifest)->required();
  c->add_option("manifest_t", manifest_t)->required();
  c->add_option("--level", level)->required();

  int genus_prime = 3;
  std::string induce_out;
  auto* ind = app.add_subcommand("induce", "Induce a chain to the non-orientable group");
  ind->add_option("manifest", manifest)->required();
  ind->add_option("--genus-prime", genus_prime, "Non-orientable genus");
  ind->add_option("--out", induce_out, "Output directory");

  int length = 3;
  int max_level = -1;
  auto* u = app.add_subcommand("urs", "Check that short nontrivial words move the basepoint");
  u->add_option("manifest", manifest)->required();
  u->add_option("--length", length, "Word length bound")->required();
  u->add_option("--max-level", max_level, "Deepest level (default: chain depth)");

  int dehn_genus = 2;
  bool nonorientable = false;
  std::string word;
  auto* d = app.add_subcommand("dehn", "Decide whether a word is trivial");
  d->add_option("--genus", dehn_genus, "Genus");
  d->add_flag("--nonorientable", nonorientable, "Use the non-orientable presentation");
  d->add_option("word", word, "Word such as \"a1 b1^-1\"")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (b->parsed()) {
      return cmd_build(build, out);
    }
    if (v->parsed()) {
      return cmd_verify(manifest, out);
    }
    if (m->parsed()) {
      return cmd_measure(manifest, fixed_spec, moved_spec, level_spec, out);
    }
    if (c->parsed()) {
      return cmd_compare(manifest, manifest_t, level, out);
    }
    if (ind->parsed()) {
      return cmd_induce(manifest, genus_prime, induce_out, out);
    }
    if (u->parsed()) {
      return cmd_urs(manifest, length, max_level, out);
    }
    return cmd_dehn(dehn_genus, nonorientable, word, out);
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConstructionExhausted& e) {
    err << "construction exhausted: " << e.what() << '\n';
    return kExitExhausted;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ForeignGenerators& e) {
    err << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PresentationUnsupported& e) {
    err << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PresentationMismatch& e) {
    err << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerification;
  }
}

}  // namespace allostery
