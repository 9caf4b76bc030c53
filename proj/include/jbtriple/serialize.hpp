#pragma once

#include <json.hpp>

#include "jbtriple/functional.hpp"

namespace jbt {

using json = nlohmann::json;

/// Bit pattern of a double as "0x" + 16 hex digits, and back.
std::string to_hex(double v);
double from_hex(const std::string& s);

json to_json(const TripleSpace& space);
TripleSpace space_from_json(const json& j);

/// {"space": ..., "blocks": [[[re,im], ...], ...], "blocks_hex": ...}.
/// Each block is listed column-major. On reading, "blocks_hex" wins
/// when present so the round trip is bit-exact.
json to_json(const Elementd& x);
Elementd element_from_json(const json& j);

/// {"space": ..., "rep": {"blocks": ..., "blocks_hex": ...}}.
json to_json(const NormalFunctionald& phi);
NormalFunctionald functional_from_json(const json& j);

/// Dense complex matrix as {"rows","cols","data":[[re,im],...],"data_hex"}.
json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const json& j);

}  // namespace jbt
