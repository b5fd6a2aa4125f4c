#include "mastergeo/cli/app.hpp"

#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "mastergeo/cli/commands.hpp"
#include "mastergeo/cli/config.hpp"
#include "mastergeo/cli/model_io.hpp"
#include "mastergeo/cli/verify.hpp"
#include "mastergeo/error.hpp"

namespace mastergeo::cli {

namespace {

std::optional<Vector> to_vector(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    return Vector::Map(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("output: cannot open '" + path + "' for writing");
    return f;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Rk4Tableau& tableau) {
    CLI::App app{"Solvable master equations, their moment systems and contact-geometric relaxation."};
    app.name("mastergeo");
    app.require_subcommand(1);

    std::string config_path;
    ConfigOverrides overrides;
    std::string output;
    double t_max = 0.0, dt = 0.0;
    std::uint64_t seed = 0;
    auto* simulate_cmd = app.add_subcommand("simulate", "Integrate an experiment and write its CSV trajectory");
    simulate_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();
    auto* sim_output = simulate_cmd->add_option("--output", output, "Override the CSV output path");
    auto* sim_tmax = simulate_cmd->add_option("--t-max", t_max, "Override t_max");
    auto* sim_dt = simulate_cmd->add_option("--dt", dt, "Override dt");
    auto* sim_seed = simulate_cmd->add_option("--seed", seed, "Override the seed");

    std::string model_path, geometry_output;
    std::vector<double> theta, eta;
    auto* geometry_cmd = app.add_subcommand("geometry", "Report potentials, metric and connections as JSON");
    geometry_cmd->add_option("model", model_path, "Model spec (JSON)")->required();
    auto* theta_opt = geometry_cmd->add_option("--theta", theta, "Natural parameters")->allow_extra_args();
    auto* eta_opt = geometry_cmd->add_option("--eta", eta, "Expectation parameters")->allow_extra_args();
    theta_opt->excludes(eta_opt);
    geometry_cmd->add_option("--output", geometry_output, "Write the report here instead of stdout");

    std::string scope = "all";
    unsigned threads = 0;
    auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite");
    verify_cmd->add_option("scope", scope, "all, exp_family, legendre, master, moments or contact");
    verify_cmd->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    }

    try {
        if (*simulate_cmd) {
            if (*sim_output) overrides.output = output;
            if (*sim_tmax) overrides.t_max = t_max;
            if (*sim_dt) overrides.dt = dt;
            if (*sim_seed) overrides.seed = seed;
            const ExperimentConfig cfg = parse_config(read_json_file(config_path), overrides);
            std::ofstream csv = open_output(cfg.output);
            const SimulationSummary summary = simulate(cfg, csv, tableau);
            csv.close();
            if (!csv) throw ValidationError("output: failed writing '" + cfg.output + "'");
            out << format_summary(summary, cfg.output) << '\n';
            return kSuccess;
        }
        if (*geometry_cmd) {
            if (theta.empty() == eta.empty()) throw ValidationError("geometry: exactly one of --theta/--eta is required");
            const StateSpace model = parse_model(read_json_file(model_path));
            const std::string report = geometry_report(model, to_vector(theta), to_vector(eta)).dump(2) + "\n";
            if (geometry_output.empty()) {
                out << report;
            } else {
                std::ofstream f = open_output(geometry_output);
                f << report;
            }
            return kSuccess;
        }
        VerifyOptions opts;
        opts.tableau = tableau;
        opts.threads = threads;
        return print_verification(out, run_verification(scope, opts)) ? kSuccess : kVerificationFailure;
    } catch (const NonConvergenceError& e) {
        err << "error: " << e.what() << " (residual " << e.residual() << ")\n";
        return kNumericFailure;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << '\n';
        return kNumericFailure;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    }
}

}  // namespace mastergeo::cli
