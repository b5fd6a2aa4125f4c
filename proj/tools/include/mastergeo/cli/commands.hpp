#pragma once

#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "mastergeo/cli/config.hpp"
#include "mastergeo/ode.hpp"

namespace mastergeo::cli {

struct SimulationSummary {
    Mode mode;
    std::size_t rows = 0;
    /// "kl" for master modes, "abs_h" otherwise.
    std::string final_label;
    double final_value = 0.0;
    /// Least-squares slope of ln(deviation from equilibrium) against t: the
    /// sup-norm distance to p^eq for master modes, |h| otherwise. NaN when
    /// the trajectory starts at equilibrium.
    double fitted_rate = 0.0;
};

/// Runs the configured experiment and writes the mode's CSV to `csv`.
SimulationSummary simulate(const ExperimentConfig& cfg, std::ostream& csv,
                           const Rk4Tableau& tableau = Rk4Tableau::classical());

std::string format_summary(const SimulationSummary& s, const std::string& output);

/// Geometry report at θ (exactly one of theta/eta set). For the Ising model
/// the report also carries closed-form references and absolute deviations.
nlohmann::json geometry_report(const StateSpace& model, const std::optional<Vector>& theta,
                               const std::optional<Vector>& eta);

}  // namespace mastergeo::cli
