#pragma once

#include <string>

#include <json.hpp>

#include "bernwf/measures.hpp"

namespace bernwf {

// Parses a model config. Unknown keys are hard errors carrying the key
// path; support and invariant violations are reported with the offending
// value. Throws std::invalid_argument.
ModelParams model_from_json(const nlohmann::json& j);

// Reads and parses a JSON config file; parse errors carry the byte
// position reported by the JSON parser.
ModelParams model_from_file(const std::string& path);

nlohmann::json model_to_json(const ModelParams& params);

// FNV-1a hash of the canonical dump, as a fixed-width hex string.
std::string config_hash(const nlohmann::json& j);

}  // namespace bernwf
