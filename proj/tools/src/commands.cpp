#include "mastergeo/cli/commands.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mastergeo/contact.hpp"
#include "mastergeo/csv.hpp"
#include "mastergeo/error.hpp"
#include "mastergeo/legendre.hpp"
#include "mastergeo/master.hpp"
#include "mastergeo/moments.hpp"
#include "mastergeo/random.hpp"

namespace mastergeo::cli {

using nlohmann::json;

namespace {

// Fit only where the deviation is well above round-off relative to its start.
double fit_rate(const std::vector<double>& times, const std::vector<double>& deviation) {
    double peak = 0.0;
    for (double d : deviation) peak = std::max(peak, d);
    if (!(peak > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return fitted_log_rate(times, deviation, peak * 1e-10);
}

Distribution initial_distribution(const ExperimentConfig& cfg, Rng& rng) {
    if (cfg.initial.random) return sample_simplex(rng, cfg.model.num_states());
    if (cfg.initial.distribution) return Distribution(*cfg.initial.distribution);
    throw ValidationError("initial: a distribution is required for mode " + to_string(cfg.mode));
}

SimulationSummary simulate_master(const ExperimentConfig& cfg, std::ostream& csv_out, const Rk4Tableau& tableau) {
    Rng rng(cfg.seed);
    const Distribution p0 = initial_distribution(cfg, rng);
    ThetaPoint th(cfg.parameters);
    VectorField field;
    if (cfg.mode == Mode::DualMaster) {
        const EtaPoint et(cfg.model, cfg.parameters);
        th = theta_of_eta(cfg.model, et);
        field = dual_field(cfg.model, et);
    } else {
        field = primary_field(cfg.model, th);
    }
    Trajectory traj = integrate(field, p0, cfg.t_max, cfg.dt, tableau);
    attach_diagnostics(traj, cfg.model, th);
    write_trajectory_csv(csv_out, cfg.model, traj);

    const Vector peq = equilibrium_distribution(cfg.model, th).probabilities();
    std::vector<double> deviation;
    deviation.reserve(traj.states.size());
    for (const auto& p : traj.states) deviation.push_back((p.probabilities() - peq).lpNorm<Eigen::Infinity>());
    return {cfg.mode, traj.times.size(), "kl", traj.diagnostics.back().kl, fit_rate(traj.times, deviation)};
}

SimulationSummary simulate_primary_moments(const ExperimentConfig& cfg, std::ostream& csv_out,
                                           const Rk4Tableau& tableau) {
    const ThetaPoint th(cfg.parameters);
    Rng rng(cfg.seed);
    PrimaryMomentState s0{th, eta_of_theta(cfg.model, th).value(), psi_eq(cfg.model, th)};
    if (cfg.initial.averages) {
        s0.moments = *cfg.initial.averages;
        s0.psi = *cfg.initial.potential;
    } else if (!cfg.initial.on_manifold) {
        const Distribution p = initial_distribution(cfg, rng);
        s0.moments = expectations(cfg.model, p);
        s0.psi = psi_noneq(cfg.model, th, p);
    }
    const auto traj = integrate_primary_moments(cfg.model, s0, cfg.t_max, cfg.dt, tableau);
    write_primary_moments_csv(csv_out, traj);

    const double eq = psi_eq(cfg.model, th);
    std::vector<double> dev;
    for (const auto& s : traj.states) dev.push_back(std::abs(s.psi - eq));
    return {cfg.mode, traj.times.size(), "abs_h", dev.back(), fit_rate(traj.times, dev)};
}

SimulationSummary simulate_dual_moments(const ExperimentConfig& cfg, std::ostream& csv_out,
                                        const Rk4Tableau& tableau) {
    const EtaPoint et(cfg.model, cfg.parameters);
    const ThetaPoint th = theta_of_eta(cfg.model, et);
    const double phi = phi_eq(cfg.model, et);
    Rng rng(cfg.seed);
    DualMomentState s0{et, th.value(), phi};
    if (cfg.initial.averages) {
        s0.theta_avg = *cfg.initial.averages;
        s0.h = *cfg.initial.potential;
    } else if (!cfg.initial.on_manifold) {
        // ⟨θ⟩ has no microscopic definition; a random or distribution start
        // perturbs it uniformly in [-1, 1] around its equilibrium value.
        const Distribution p = initial_distribution(cfg, rng);
        s0.h = cross_entropy(equilibrium_distribution(cfg.model, th), p);
        for (Eigen::Index a = 0; a < s0.theta_avg.size(); ++a) s0.theta_avg(a) += rng.uniform(-1.0, 1.0);
    }
    const auto traj = integrate_dual_moments(cfg.model, s0, cfg.t_max, cfg.dt, tableau);
    write_dual_moments_csv(csv_out, traj);

    std::vector<double> dev;
    for (const auto& s : traj.states) dev.push_back(std::abs(s.h - phi));
    return {cfg.mode, traj.times.size(), "abs_h", dev.back(), fit_rate(traj.times, dev)};
}

SimulationSummary simulate_contact(const ExperimentConfig& cfg, std::ostream& csv_out, const Rk4Tableau& tableau) {
    const Potential w = cfg.mode == Mode::ContactPsi ? psi_potential(cfg.model) : phi_potential(cfg.model);
    ContactPoint p0 = legendre_submanifold_point(w, cfg.parameters);
    if (cfg.initial.averages) {
        p0.y = *cfg.initial.averages;
        p0.z = *cfg.initial.potential;
    } else if (cfg.initial.random) {
        Rng rng(cfg.seed);
        for (Eigen::Index a = 0; a < p0.y.size(); ++a) p0.y(a) += rng.uniform(-1.0, 1.0);
        p0.z += rng.uniform(-1.0, 1.0);
    }
    const auto traj = integrate_relaxation(w, p0, cfg.t_max, cfg.dt, tableau);
    write_contact_csv(csv_out, w, traj);

    std::vector<double> dev;
    for (const auto& pt : traj.states) dev.push_back(std::abs(hamiltonian_value(w, pt)));
    return {cfg.mode, traj.times.size(), "abs_h", dev.back(), fit_rate(traj.times, dev)};
}

json to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Vector(m.row(i).transpose())));
    return rows;
}

json to_json(const Tensor3& t) {
    json out = json::array();
    for (std::size_t a = 0; a < t.dim(); ++a) {
        json plane = json::array();
        for (std::size_t b = 0; b < t.dim(); ++b) {
            json row = json::array();
            for (std::size_t c = 0; c < t.dim(); ++c) row.push_back(t(a, b, c));
            plane.push_back(row);
        }
        out.push_back(plane);
    }
    return out;
}

bool is_ising_like(const StateSpace& m) {
    if (m.num_observables() != 1 || m.num_states() != 2) return false;
    const double a = m.observables()(0, 0), b = m.observables()(0, 1);
    return (a == 1.0 && b == -1.0) || (a == -1.0 && b == 1.0);
}

}  // namespace

SimulationSummary simulate(const ExperimentConfig& cfg, std::ostream& csv_out, const Rk4Tableau& tableau) {
    switch (cfg.mode) {
        case Mode::PrimaryMaster:
        case Mode::DualMaster:
            return simulate_master(cfg, csv_out, tableau);
        case Mode::PrimaryMoments:
            return simulate_primary_moments(cfg, csv_out, tableau);
        case Mode::DualMoments:
            return simulate_dual_moments(cfg, csv_out, tableau);
        case Mode::ContactPsi:
        case Mode::ContactPhi:
            return simulate_contact(cfg, csv_out, tableau);
    }
    throw ValidationError("mode: unsupported");
}

std::string format_summary(const SimulationSummary& s, const std::string& output) {
    std::ostringstream os;
    os << "mode=" << to_string(s.mode) << " rows=" << s.rows << " final_" << s.final_label << '='
       << csv::format_double(s.final_value) << " fitted_rate=";
    if (std::isnan(s.fitted_rate)) {
        os << "n/a";
    } else {
        os << csv::format_double(s.fitted_rate);
    }
    os << " output=" << output;
    return os.str();
}

json geometry_report(const StateSpace& model, const std::optional<Vector>& theta, const std::optional<Vector>& eta) {
    if (theta.has_value() == eta.has_value()) throw ValidationError("geometry: pass exactly one of --theta or --eta");
    if (model.degenerate()) {
        throw RankDeficientModelError("rank-deficient model: centered observables have rank " +
                                      std::to_string(model.centered_rank()) + " < " +
                                      std::to_string(model.num_observables()));
    }
    json report;
    report["model"] = {{"labels", model.labels()}, {"num_observables", model.num_observables()}};

    std::optional<ThetaPoint> th;
    std::optional<EtaPoint> et;
    if (theta) {
        if (static_cast<std::size_t>(theta->size()) != model.num_observables()) {
            throw ValidationError("--theta: expected " + std::to_string(model.num_observables()) + " values");
        }
        th.emplace(*theta);
        et.emplace(eta_of_theta(model, *th));
        report["input"] = {{"theta", to_json(*theta)}};
    } else {
        if (static_cast<std::size_t>(eta->size()) != model.num_observables()) {
            throw ValidationError("--eta: expected " + std::to_string(model.num_observables()) + " values");
        }
        et.emplace(model, *eta);
        th.emplace(theta_of_eta(model, *et));
        report["input"] = {{"eta", to_json(*eta)}};
    }

    report["theta"] = to_json(th->value());
    report["eta"] = to_json(et->value());
    report["theta_of_eta"] = to_json(theta_of_eta(model, *et).value());
    report["psi_eq"] = psi_eq(model, *th);
    report["phi_eq"] = phi_eq(model, *et);
    report["h_eq"] = h_eq(model, *th);
    const Matrix g = fisher_metric(model, *th);
    report["fisher"] = to_json(g);
    report["fisher_inverse"] = to_json(hessian_phi(model, *et));
    report["cubic_form"] = to_json(cubic_form(model, *th));
    report["alpha_connection"] = {{"-1", to_json(alpha_connection(model, *th, -1.0))},
                                  {"0", to_json(alpha_connection(model, *th, 0.0))},
                                  {"1", to_json(alpha_connection(model, *th, 1.0))}};

    if (is_ising_like(model)) {
        // State order does not matter: both orderings give the same sums.
        const double t = (*th)[0];
        const double e = std::tanh(t);
        const double sech2 = 1.0 / (std::cosh(t) * std::cosh(t));
        const json ref = {
            {"psi_eq", std::log(2.0 * std::cosh(t))},
            {"eta", e},
            {"fisher", sech2},
            {"fisher_inverse", 1.0 / (1.0 - e * e)},
            {"cubic_form", -2.0 * sech2 * e},
            {"phi_eq", 0.5 * e * std::log((1.0 + e) / (1.0 - e)) + 0.5 * std::log(1.0 - e * e) - std::log(2.0)},
            {"h_eq", t * e - std::log(2.0 * std::cosh(t))},
        };
        const json dev = {
            {"psi_eq", std::abs(report["psi_eq"].get<double>() - ref["psi_eq"].get<double>())},
            {"eta", std::abs((*et)[0] - ref["eta"].get<double>())},
            {"fisher", std::abs(g(0, 0) - ref["fisher"].get<double>())},
            {"fisher_inverse",
             std::abs(report["fisher_inverse"][0][0].get<double>() - ref["fisher_inverse"].get<double>())},
            {"cubic_form", std::abs(report["cubic_form"][0][0][0].get<double>() - ref["cubic_form"].get<double>())},
            {"phi_eq", std::abs(report["phi_eq"].get<double>() - ref["phi_eq"].get<double>())},
            {"h_eq", std::abs(report["h_eq"].get<double>() - ref["h_eq"].get<double>())},
        };
        report["ising_reference"] = ref;
        report["ising_deviation"] = dev;
    }
    return report;
}

}  // namespace mastergeo::cli
