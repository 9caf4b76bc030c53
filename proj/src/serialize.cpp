#include "jbtriple/serialize.hpp"

#include <bit>
#include <cstdio>

namespace jbt {

std::string to_hex(double v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(v)));
  return buf;
}

double from_hex(const std::string& s) {
  if (s.size() != 18 || s[0] != '0' || s[1] != 'x') throw ConfigError("bad hex float: " + s);
  std::size_t used = 0;
  const unsigned long long bits = std::stoull(s.substr(2), &used, 16);
  if (used != 16) throw ConfigError("bad hex float: " + s);
  return std::bit_cast<double>(static_cast<std::uint64_t>(bits));
}

json to_json(const TripleSpace& space) {
  auto factor = [](const Factor& f) {
    switch (f.kind) {
      case FactorKind::kRect:
        return json{{"kind", "rect"}, {"rows", f.rows}, {"cols", f.cols}};
      case FactorKind::kSym:
        return json{{"kind", "sym"}, {"n", f.rows}};
      case FactorKind::kAntisym:
        return json{{"kind", "antisym"}, {"n", f.rows}};
    }
    return json{};
  };
  if (!space.is_sum()) return factor(space.factor(0));
  json parts = json::array();
  for (const auto& f : space.factors()) parts.push_back(factor(f));
  return json{{"kind", "sum"}, {"parts", parts}};
}

TripleSpace space_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "rect") return TripleSpace::rect(j.at("rows").get<int>(), j.at("cols").get<int>());
    if (kind == "sym") return TripleSpace::sym(j.at("n").get<int>());
    if (kind == "antisym") return TripleSpace::antisym(j.at("n").get<int>());
    if (kind == "sum") {
      std::vector<TripleSpace> parts;
      for (const auto& p : j.at("parts")) parts.push_back(space_from_json(p));
      return TripleSpace::sum(parts);
    }
    throw ConfigError("unknown space kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed space: ") + e.what());
  }
}

namespace {

json entries(const Eigen::MatrixXcd& m, bool hex) {
  json out = json::array();
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const auto z = m(i, j);
      if (hex) {
        out.push_back(json::array({to_hex(z.real()), to_hex(z.imag())}));
      } else {
        out.push_back(json::array({z.real(), z.imag()}));
      }
    }
  return out;
}

Eigen::MatrixXcd read_entries(const json& data, const json* hex, int rows, int cols) {
  const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  const json& src = hex ? *hex : data;
  if (!src.is_array() || src.size() != n) throw ConfigError("matrix entry count does not match its shape");
  Eigen::MatrixXcd m(rows, cols);
  std::size_t k = 0;
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i, ++k) {
      const json& e = src[k];
      if (hex) {
        m(i, j) = {from_hex(e.at(0).get<std::string>()), from_hex(e.at(1).get<std::string>())};
      } else {
        m(i, j) = {e.at(0).get<double>(), e.at(1).get<double>()};
      }
    }
  return m;
}

json blocks_json(const Elementd& x, bool hex) {
  json out = json::array();
  for (const auto& b : x.blocks()) out.push_back(entries(b, hex));
  return out;
}

Elementd read_blocks(const TripleSpace& space, const json& j) {
  try {
    const json& data = j.at("blocks");
    const json* hex = j.contains("blocks_hex") ? &j.at("blocks_hex") : nullptr;
    if (!data.is_array() || static_cast<int>(data.size()) != space.num_blocks()) {
      throw ConfigError("block count does not match the space");
    }
    std::vector<Eigen::MatrixXcd> blocks;
    for (int b = 0; b < space.num_blocks(); ++b) {
      const auto& f = space.factor(b);
      const auto ub = static_cast<std::size_t>(b);
      blocks.push_back(read_entries(data[ub], hex ? &(*hex)[ub] : nullptr, f.rows, f.cols));
    }
    return Elementd(space, std::move(blocks));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed element: ") + e.what());
  }
}

}  // namespace

json to_json(const Elementd& x) {
  return json{{"space", to_json(x.space())}, {"blocks", blocks_json(x, false)}, {"blocks_hex", blocks_json(x, true)}};
}

Elementd element_from_json(const json& j) {
  if (!j.contains("space")) throw ConfigError("element without a space");
  return read_blocks(space_from_json(j.at("space")), j);
}

json to_json(const NormalFunctionald& phi) {
  const auto& r = phi.rep();
  return json{{"space", to_json(phi.space())},
              {"rep", {{"blocks", blocks_json(r, false)}, {"blocks_hex", blocks_json(r, true)}}}};
}

NormalFunctionald functional_from_json(const json& j) {
  if (!j.contains("space") || !j.contains("rep")) throw ConfigError("functional needs 'space' and 'rep'");
  return NormalFunctionald(read_blocks(space_from_json(j.at("space")), j.at("rep")));
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", entries(m, false)}, {"data_hex", entries(m, true)}};
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
  try {
    const json* hex = j.contains("data_hex") ? &j.at("data_hex") : nullptr;
    return read_entries(j.at("data"), hex, j.at("rows").get<int>(), j.at("cols").get<int>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed matrix: ") + e.what());
  }
}

}  // namespace jbt
