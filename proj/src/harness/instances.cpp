#include "jbtriple/harness.hpp"

namespace jbt {

json generate_instance(const std::string& spec, std::uint64_t seed) {
  TripleSpace space = TripleSpace::rect(1, 1);
  try {
    space = TripleSpace::parse(spec);
  } catch (const std::exception& e) {
    throw ConfigError("bad space spec '" + spec + "': " + e.what());
  }
  Rng rng(seed);
  json j = to_json(random_element<double>(space, rng));
  j["seed"] = seed;
  return j;
}

json to_json(const ConstantInstance& inst) {
  json j{{"mode", inst.mode == GiMode::kLittle ? "little" : "big"},
         {"space", to_json(inst.space)},
         {"operator", matrix_to_json(inst.operator_)},
         {"seed", inst.seed},
         {"iterations", inst.iterations},
         {"bound", inst.bound},
         {"bound_hex", to_hex(inst.bound)}};
  if (inst.mode == GiMode::kBig) j["right"] = to_json(inst.right);
  return j;
}

ConstantInstance constant_instance_from_json(const json& j) {
  ConstantInstance inst;
  try {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "little") {
      inst.mode = GiMode::kLittle;
    } else if (mode == "big") {
      inst.mode = GiMode::kBig;
    } else {
      throw ConfigError("unknown mode '" + mode + "'");
    }
    inst.space = space_from_json(j.at("space"));
    inst.right = inst.mode == GiMode::kBig ? space_from_json(j.at("right")) : inst.space;
    inst.operator_ = matrix_from_json(j.at("operator"));
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.iterations = j.at("iterations").get<int>();
    inst.bound = j.contains("bound_hex") ? from_hex(j.at("bound_hex").get<std::string>()) : j.value("bound", 0.0);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed instance: ") + e.what());
  }
  const int cols = inst.space.complex_dim();
  const int rows = inst.mode == GiMode::kBig ? inst.space.complex_dim() : static_cast<int>(inst.operator_.rows());
  if (inst.operator_.cols() != (inst.mode == GiMode::kBig ? inst.right.complex_dim() : cols) ||
      inst.operator_.rows() != rows) {
    throw ConfigError("instance operator does not match its space");
  }
  return inst;
}

}  // namespace jbt
