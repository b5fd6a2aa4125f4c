#include "mastergeo/cli/model_io.hpp"

#include <fstream>

#include "mastergeo/error.hpp"

namespace mastergeo::cli {

using nlohmann::json;

StateSpace parse_model(const json& spec, const std::string& where) {
    if (!spec.is_object()) throw ValidationError(where + ": expected an object");
    if (!spec.contains("type") || !spec["type"].is_string()) {
        throw ValidationError(where + ".type: required string (\"ising\" or \"custom\")");
    }
    const std::string type = spec["type"].get<std::string>();
    if (type == "ising") return make_ising();
    if (type != "custom") throw ValidationError(where + ".type: unknown model type '" + type + "'");

    if (!spec.contains("labels") || !spec["labels"].is_array()) {
        throw ValidationError(where + ".labels: required array of strings");
    }
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < spec["labels"].size(); ++j) {
        const auto& l = spec["labels"][j];
        if (!l.is_string()) throw ValidationError(where + ".labels[" + std::to_string(j) + "]: expected a string");
        labels.push_back(l.get<std::string>());
    }

    if (!spec.contains("observables") || !spec["observables"].is_array() || spec["observables"].empty()) {
        throw ValidationError(where + ".observables: required non-empty array of rows");
    }
    const auto& rows = spec["observables"];
    Matrix o(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(labels.size()));
    for (std::size_t a = 0; a < rows.size(); ++a) {
        const std::string field = where + ".observables[" + std::to_string(a) + "]";
        if (!rows[a].is_array()) throw ValidationError(field + ": expected an array of numbers");
        if (rows[a].size() != labels.size()) {
            throw ValidationError(field + ": expected " + std::to_string(labels.size()) +
                                  " entries (one per label), got " + std::to_string(rows[a].size()));
        }
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (!rows[a][j].is_number()) {
                throw ValidationError(field + "[" + std::to_string(j) + "]: expected a number");
            }
            o(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j)) = rows[a][j].get<double>();
        }
    }
    try {
        return StateSpace(std::move(labels), std::move(o));
    } catch (const ValidationError& e) {
        throw ValidationError(where + "." + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("'" + path + "': invalid JSON: " + e.what());
    }
}

}  // namespace mastergeo::cli
