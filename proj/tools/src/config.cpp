#include "mastergeo/cli/config.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "mastergeo/cli/model_io.hpp"
#include "mastergeo/error.hpp"

namespace mastergeo::cli {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Mode, const char*>, 6> kModes{{
    {Mode::PrimaryMaster, "primary-master"},
    {Mode::DualMaster, "dual-master"},
    {Mode::PrimaryMoments, "primary-moments"},
    {Mode::DualMoments, "dual-moments"},
    {Mode::ContactPsi, "contact-psi"},
    {Mode::ContactPhi, "contact-phi"},
}};

bool is_master(Mode m) { return m == Mode::PrimaryMaster || m == Mode::DualMaster; }
bool is_moments(Mode m) { return m == Mode::PrimaryMoments || m == Mode::DualMoments; }

double number_field(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ValidationError(where + ": required number");
    if (!obj[key].is_number()) throw ValidationError(where + ": expected a number");
    const double v = obj[key].get<double>();
    if (!std::isfinite(v)) throw ValidationError(where + ": must be finite");
    return v;
}

Vector vector_field(const json& value, const std::string& where) {
    if (!value.is_array() || value.empty()) throw ValidationError(where + ": expected a non-empty array of numbers");
    Vector v(static_cast<Eigen::Index>(value.size()));
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_number()) throw ValidationError(where + "[" + std::to_string(i) + "]: expected a number");
        v(static_cast<Eigen::Index>(i)) = value[i].get<double>();
    }
    return v;
}

InitialCondition parse_initial(const json& doc, Mode mode, const StateSpace& model) {
    if (!doc.contains("initial")) throw ValidationError("initial: required object");
    const json& init = doc["initial"];
    if (!init.is_object()) throw ValidationError("initial: expected an object");

    InitialCondition ic;
    const std::size_t n = model.num_observables();
    const bool contact = !is_master(mode) && !is_moments(mode);
    const char* avg_key = mode == Mode::PrimaryMoments ? "moments" : mode == Mode::DualMoments ? "theta_avg" : "y";
    const char* pot_key = mode == Mode::PrimaryMoments ? "psi" : mode == Mode::DualMoments ? "h" : "z";

    int chosen = 0;
    if (init.contains("random")) {
        if (!init["random"].is_boolean()) throw ValidationError("initial.random: expected a boolean");
        ic.random = init["random"].get<bool>();
        chosen += ic.random;
    }
    if (init.contains("on_manifold")) {
        if (is_master(mode)) throw ValidationError("initial.on_manifold: not valid for mode " + to_string(mode));
        if (!init["on_manifold"].is_boolean()) throw ValidationError("initial.on_manifold: expected a boolean");
        ic.on_manifold = init["on_manifold"].get<bool>();
        chosen += ic.on_manifold;
    }
    if (init.contains("distribution")) {
        if (contact) throw ValidationError("initial.distribution: not valid for mode " + to_string(mode));
        Vector p = vector_field(init["distribution"], "initial.distribution");
        if (static_cast<std::size_t>(p.size()) != model.num_states()) {
            throw ValidationError("initial.distribution: expected " + std::to_string(model.num_states()) + " entries");
        }
        try {
            (void)Distribution(p);
        } catch (const ValidationError& e) {
            throw ValidationError(std::string("initial.") + e.what());
        }
        ic.distribution = std::move(p);
        ++chosen;
    }
    if (!is_master(mode) && (init.contains(avg_key) || init.contains(pot_key))) {
        const std::string a = std::string("initial.") + avg_key;
        if (!init.contains(avg_key)) throw ValidationError(a + ": required together with initial." + pot_key);
        ic.averages = vector_field(init[avg_key], a);
        if (static_cast<std::size_t>(ic.averages->size()) != n) {
            throw ValidationError(a + ": expected " + std::to_string(n) + " entries");
        }
        ic.potential = number_field(init, pot_key, std::string("initial.") + pot_key);
        ++chosen;
    }
    if (chosen != 1) {
        std::string options = is_master(mode) ? "distribution | random"
                                              : std::string(contact ? "" : "distribution | ") + avg_key + "+" +
                                                    pot_key + " | random | on_manifold";
        throw ValidationError("initial: specify exactly one of " + options);
    }
    return ic;
}

}  // namespace

std::string to_string(Mode mode) {
    for (const auto& [m, name] : kModes) {
        if (m == mode) return name;
    }
    return "unknown";
}

Mode parse_mode(const std::string& name) {
    for (const auto& [m, n] : kModes) {
        if (name == n) return m;
    }
    throw ValidationError("mode: unknown mode '" + name + "'");
}

bool uses_eta(Mode mode) {
    return mode == Mode::DualMaster || mode == Mode::DualMoments || mode == Mode::ContactPhi;
}

ExperimentConfig parse_config(const json& doc, const ConfigOverrides& overrides) {
    if (!doc.is_object()) throw ValidationError("config: expected a JSON object");
    if (!doc.contains("model")) throw ValidationError("model: required object");
    StateSpace model = parse_model(doc["model"]);

    if (!doc.contains("mode") || !doc["mode"].is_string()) throw ValidationError("mode: required string");
    const Mode mode = parse_mode(doc["mode"].get<std::string>());

    const char* param_key = uses_eta(mode) ? "eta" : "theta";
    const char* other_key = uses_eta(mode) ? "theta" : "eta";
    if (doc.contains(other_key)) {
        throw ValidationError(std::string(other_key) + ": not valid for mode " + to_string(mode) + " (use " +
                              param_key + ")");
    }
    if (!doc.contains(param_key)) throw ValidationError(std::string(param_key) + ": required for mode " + to_string(mode));
    Vector params = vector_field(doc[param_key], param_key);
    if (static_cast<std::size_t>(params.size()) != model.num_observables()) {
        throw ValidationError(std::string(param_key) + ": expected " + std::to_string(model.num_observables()) +
                              " entries");
    }
    if (uses_eta(mode)) {
        try {
            (void)EtaPoint(model, params);
        } catch (const ValidationError& e) {
            throw ValidationError(std::string(param_key) + ": " + e.what());
        }
    } else if (!params.allFinite()) {
        throw ValidationError("theta: entries must be finite");
    }

    InitialCondition initial = parse_initial(doc, mode, model);

    double t_max = overrides.t_max ? *overrides.t_max : number_field(doc, "t_max", "t_max");
    double dt = overrides.dt ? *overrides.dt : number_field(doc, "dt", "dt");
    if (!(dt > 0.0)) throw ValidationError("dt: must be positive");
    if (!(t_max > 0.0)) throw ValidationError("t_max: must be positive");
    if (dt > t_max) throw ValidationError("dt: must not exceed t_max");

    std::string output;
    if (overrides.output) {
        output = *overrides.output;
    } else if (doc.contains("output")) {
        if (!doc["output"].is_string()) throw ValidationError("output: expected a path string");
        output = doc["output"].get<std::string>();
    } else {
        throw ValidationError("output: required path (or pass --output)");
    }

    std::uint64_t seed = 0;
    if (overrides.seed) {
        seed = *overrides.seed;
    } else if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) throw ValidationError("seed: expected a non-negative integer");
        seed = doc["seed"].get<std::uint64_t>();
    }
    if (initial.random && !overrides.seed && !doc.contains("seed")) {
        throw ValidationError("seed: required when initial.random is true");
    }

    return ExperimentConfig{std::move(model), mode, std::move(params), std::move(initial), t_max, dt,
                            std::move(output), seed};
}

}  // namespace mastergeo::cli
