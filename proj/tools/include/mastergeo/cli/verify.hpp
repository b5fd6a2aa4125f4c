#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "mastergeo/ode.hpp"

namespace mastergeo::cli {

struct VerifyOptions {
    /// Integrator used by every trajectory-based check.
    Rk4Tableau tableau = Rk4Tableau::classical();
    unsigned threads = 0;  ///< 0 selects std::thread::hardware_concurrency().
};

struct CheckResult {
    std::string module;
    std::string name;
    double worst = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string error;  ///< Set when the check threw.
};

/// Module names accepted as a verify scope, besides "all".
const std::vector<std::string>& verify_modules();

/// Runs every invariant check in `scope` ("all" or a module name). Checks
/// run on worker threads; results come back in catalog order.
std::vector<CheckResult> run_verification(const std::string& scope, const VerifyOptions& opts = {});

/// One line per check, then a totals line. Returns true iff all passed.
bool print_verification(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace mastergeo::cli
