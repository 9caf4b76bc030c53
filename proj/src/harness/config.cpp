#include <fstream>

#include "jbtriple/harness.hpp"

namespace jbt {

void RunConfig::validate() const {
  if (samples < 1) throw ConfigError("samples must be at least 1 (got " + std::to_string(samples) + ")");
  if (!(tol_algebraic > 0)) throw ConfigError("tol_algebraic must be positive");
  if (!(tol_opt > 0)) throw ConfigError("tol_opt must be positive");
  if (multistarts < 1) throw ConfigError("multistarts must be positive");
  if (budget < 1) throw ConfigError("budget must be positive");
  spaces();
}

std::vector<TripleSpace> RunConfig::spaces() const {
  std::vector<TripleSpace> out;
  for (const auto& d : dims) {
    try {
      out.push_back(TripleSpace::parse(d));
    } catch (const std::exception& e) {
      throw ConfigError("bad space spec '" + d + "': " + e.what());
    }
  }
  return out;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "dims") {
        c.dims = value.get<std::vector<std::string>>();
      } else if (key == "samples") {
        c.samples = value.get<int>();
      } else if (key == "tol_algebraic") {
        c.tol_algebraic = value.get<double>();
      } else if (key == "tol_opt") {
        c.tol_opt = value.get<double>();
      } else if (key == "multistarts") {
        c.multistarts = value.get<int>();
      } else if (key == "budget") {
        c.budget = value.get<int>();
      } else if (key == "out") {
        c.out_dir = value.get<std::string>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return c;
}

json to_json(const RunConfig& c) {
  return json{{"seed", c.seed},         {"dims", c.dims},     {"samples", c.samples},
              {"tol_algebraic", c.tol_algebraic}, {"tol_opt", c.tol_opt}, {"multistarts", c.multistarts},
              {"budget", c.budget},     {"out", c.out_dir}};
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace jbt
