#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mastergeo/ode.hpp"

namespace mastergeo::cli {

enum ExitCode : int { kSuccess = 0, kValidationFailure = 1, kNumericFailure = 2, kVerificationFailure = 3 };

/// Parses `args` (without the program name) and runs the chosen subcommand.
/// `tableau` replaces the RK4 coefficients everywhere; tests use it to
/// inject a broken integrator.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const Rk4Tableau& tableau = Rk4Tableau::classical());

}  // namespace mastergeo::cli
