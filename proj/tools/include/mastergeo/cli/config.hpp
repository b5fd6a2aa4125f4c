#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "mastergeo/exp_family.hpp"

namespace mastergeo::cli {

enum class Mode { PrimaryMaster, DualMaster, PrimaryMoments, DualMoments, ContactPsi, ContactPhi };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& name);

/// True for modes parameterized by η rather than θ.
bool uses_eta(Mode mode);

/// Exactly one way of fixing the initial state is set after parsing.
struct InitialCondition {
    std::optional<Vector> distribution;
    bool random = false;
    bool on_manifold = false;
    /// Moment modes: ⟨O⟩ or ⟨θ⟩. Contact modes: y.
    std::optional<Vector> averages;
    /// Moment modes: Ψ or H. Contact modes: z.
    std::optional<double> potential;
};

struct ExperimentConfig {
    StateSpace model;
    Mode mode;
    /// θ or η depending on the mode.
    Vector parameters;
    InitialCondition initial;
    double t_max;
    double dt;
    std::string output;
    std::uint64_t seed = 0;
};

struct ConfigOverrides {
    std::optional<std::string> output;
    std::optional<double> t_max;
    std::optional<double> dt;
    std::optional<std::uint64_t> seed;
};

/// Validates and assembles a config; errors name the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc, const ConfigOverrides& overrides = {});

}  // namespace mastergeo::cli
