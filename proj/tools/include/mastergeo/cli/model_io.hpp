#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "mastergeo/exp_family.hpp"

namespace mastergeo::cli {

/// Parses {"type":"ising"} or
/// {"type":"custom","labels":[...],"observables":[[row 1], [row 2], ...]}.
/// Errors are ValidationError naming the offending field, prefixed by `where`.
StateSpace parse_model(const nlohmann::json& spec, const std::string& where = "model");

/// Reads and parses a JSON file; unreadable or malformed files raise
/// ValidationError.
nlohmann::json read_json_file(const std::string& path);

}  // namespace mastergeo::cli
