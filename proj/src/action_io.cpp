#include <filesystem>
#include <fstream>
#include <sstream>

#include "allostery/actions.hpp"

namespace allostery {

namespace fs = std::filesystem;

nlohmann::json action_to_json(const PointedAction& action) {
  const auto& pres = action.presentation();
  nlohmann::json perms = nlohmann::json::object();
  for (int g = 0; g < pres.num_generators(); ++g) {
    perms[pres.generator_name(g)] = action.perm(g);
  }
  return {{"pres", pres.to_json()},
          {"degree", action.degree()},
          {"basepoint", action.basepoint()},
          {"perms", std::move(perms)},
          {"meta", action.meta()}};
}

namespace {

PointedAction from_json_with_perms(const nlohmann::json& j, std::vector<Permutation> perms) {
  auto pres = Presentation::from_json(j.at("pres"));
  auto degree = j.at("degree").get<Point>();
  for (const auto& p : perms) {
    if (p.size() != degree) {
      throw ParseError("permutation length differs from declared degree");
    }
  }
  nlohmann::json meta = j.contains("meta") ? j.at("meta") : nlohmann::json::object();
  return PointedAction(std::move(pres), std::move(perms), j.at("basepoint").get<Point>(),
                       std::move(meta));
}

std::vector<Permutation> read_sidecar(const fs::path& file, int ngens, Point degree) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw IoError("cannot open permutation sidecar " + file.string());
  }
  std::vector<Permutation> perms(static_cast<std::size_t>(ngens), Permutation(degree));
  for (auto& p : perms) {
    for (auto& v : p) {
      unsigned char b[4];
      if (!in.read(reinterpret_cast<char*>(b), 4)) {
        throw ParseError("truncated permutation sidecar " + file.string());
      }
      v = static_cast<Point>(b[0]) | (static_cast<Point>(b[1]) << 8) |
          (static_cast<Point>(b[2]) << 16) | (static_cast<Point>(b[3]) << 24);
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ParseError("trailing bytes in permutation sidecar " + file.string());
  }
  return perms;
}

PointedAction parse_action(const nlohmann::json& j, const fs::path& base_dir) {
  try {
    auto pres = Presentation::from_json(j.at("pres"));
    auto degree = j.at("degree").get<Point>();
    std::vector<Permutation> perms;
    if (j.contains("perms_file")) {
      perms = read_sidecar(base_dir / j.at("perms_file").get<std::string>(),
                           pres.num_generators(), degree);
    } else {
      const auto& pj = j.at("perms");
      for (int g = 0; g < pres.num_generators(); ++g) {
        perms.push_back(pj.at(pres.generator_name(g)).get<Permutation>());
      }
    }
    return from_json_with_perms(j, std::move(perms));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("action JSON: ") + e.what());
  }
}

}  // namespace

PointedAction action_from_json(const nlohmann::json& j) { return parse_action(j, fs::path{}); }

std::string canonical_serialize(const PointedAction& action, bool with_meta) {
  auto j = action_to_json(canonical_form(action));
  if (!with_meta) {
    j.erase("meta");
  }
  return j.dump();
}

void save_action(const std::string& path, const PointedAction& action, Point sidecar_threshold) {
  auto canon = canonical_form(action);
  auto j = action_to_json(canon);
  fs::path p(path);
  if (canon.degree() > sidecar_threshold) {
    fs::path side = p;
    side += ".perms.bin";
    std::ofstream bin(side, std::ios::binary);
    if (!bin) {
      throw IoError("cannot write " + side.string());
    }
    for (const auto& perm : canon.perms()) {
      for (Point v : perm) {
        unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>((v >> 8) & 0xff),
                              static_cast<unsigned char>((v >> 16) & 0xff),
                              static_cast<unsigned char>((v >> 24) & 0xff)};
        bin.write(reinterpret_cast<const char*>(b), 4);
      }
    }
    j.erase("perms");
    j["perms_file"] = side.filename().string();
  }
  std::ofstream out(p);
  if (!out) {
    throw IoError("cannot write " + p.string());
  }
  out << j.dump() << '\n';
}

PointedAction load_action(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open action file " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("action file " + path + ": " + e.what());
  }
  return parse_action(j, fs::path(path).parent_path());
}

}  // namespace allostery
