#include "mastergeo/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mastergeo/csv.hpp"
#include "mastergeo/error.hpp"
#include "mastergeo/legendre.hpp"
#include "mastergeo/master.hpp"

namespace mastergeo {

namespace {

void check_primary(const StateSpace& model, const PrimaryMomentState& s) {
    if (s.theta.dim() != model.num_observables() ||
        static_cast<std::size_t>(s.moments.size()) != model.num_observables()) {
        throw ValidationError("moment state: dimension mismatch with model");
    }
    if (!s.moments.allFinite() || !std::isfinite(s.psi)) throw ValidationError("moment state: entries must be finite");
}

void check_dual(const StateSpace& model, const DualMomentState& s) {
    if (s.eta.dim() != model.num_observables() ||
        static_cast<std::size_t>(s.theta_avg.size()) != model.num_observables()) {
        throw ValidationError("dual moment state: dimension mismatch with model");
    }
    if (!s.theta_avg.allFinite() || !std::isfinite(s.h)) {
        throw ValidationError("dual moment state: entries must be finite");
    }
}

void check_time(double t) {
    if (!(t >= 0.0)) throw ValidationError("t: must be non-negative");
}

// Packed layout shared by both systems: [static (n), averages (n), potential].
Vector pack(const Vector& fixed, const Vector& averages, double potential) {
    const Eigen::Index n = fixed.size();
    Vector y(2 * n + 1);
    y.head(n) = fixed;
    y.segment(n, n) = averages;
    y(2 * n) = potential;
    return y;
}

// Relaxation of the averages toward `target_avg` and the potential toward
// `target_potential`, with zero velocity for the static block.
VectorField relaxation_vector_field(Vector target_avg, double target_potential) {
    return [target_avg = std::move(target_avg), target_potential](const Vector& y) {
        const Eigen::Index n = target_avg.size();
        Vector dy(2 * n + 1);
        dy.head(n).setZero();
        dy.segment(n, n) = target_avg - y.segment(n, n);
        dy(2 * n) = target_potential - y(2 * n);
        return dy;
    };
}

}  // namespace

PrimaryMomentTangent primary_moment_rhs(const StateSpace& model, const PrimaryMomentState& s) {
    check_primary(model, s);
    return {Vector::Zero(s.moments.size()), eta_of_theta(model, s.theta).value() - s.moments,
            psi_eq(model, s.theta) - s.psi};
}

PrimaryMomentState primary_moment_exact(const StateSpace& model, const PrimaryMomentState& s0, double t) {
    check_primary(model, s0);
    check_time(t);
    const double decay = std::exp(-t);
    const Vector eq_moments = eta_of_theta(model, s0.theta).value();
    const double eq_psi = psi_eq(model, s0.theta);
    return {s0.theta, decay * (s0.moments - eq_moments) + eq_moments, decay * (s0.psi - eq_psi) + eq_psi};
}

DualMomentTangent dual_moment_rhs(const StateSpace& model, const DualMomentState& s) {
    check_dual(model, s);
    return {Vector::Zero(s.theta_avg.size()), grad_phi(model, s.eta) - s.theta_avg, phi_eq(model, s.eta) - s.h};
}

DualMomentState dual_moment_exact(const StateSpace& model, const DualMomentState& s0, double t) {
    check_dual(model, s0);
    check_time(t);
    const double decay = std::exp(-t);
    const Vector eq_theta = grad_phi(model, s0.eta);
    const double eq_phi = phi_eq(model, s0.eta);
    return {s0.eta, decay * (s0.theta_avg - eq_theta) + eq_theta, decay * (s0.h - eq_phi) + eq_phi};
}

PrimaryMomentTrajectory integrate_primary_moments(const StateSpace& model, const PrimaryMomentState& s0,
                                                  double t_max, double dt, const Rk4Tableau& tableau) {
    check_primary(model, s0);
    // θ is static, so the equilibrium targets are fixed along the flow.
    const auto field = relaxation_vector_field(eta_of_theta(model, s0.theta).value(), psi_eq(model, s0.theta));
    PrimaryMomentTrajectory traj;
    traj.times = uniform_time_grid(t_max, dt);
    const auto ys = integrate_rk4(field, pack(s0.theta.value(), s0.moments, s0.psi), traj.times, tableau);
    const Eigen::Index n = s0.moments.size();
    traj.states.reserve(ys.size());
    for (const auto& y : ys) traj.states.push_back({ThetaPoint(y.head(n)), y.segment(n, n), y(2 * n)});
    return traj;
}

DualMomentTrajectory integrate_dual_moments(const StateSpace& model, const DualMomentState& s0, double t_max,
                                            double dt, const Rk4Tableau& tableau) {
    check_dual(model, s0);
    const auto field = relaxation_vector_field(grad_phi(model, s0.eta), phi_eq(model, s0.eta));
    DualMomentTrajectory traj;
    traj.times = uniform_time_grid(t_max, dt);
    const auto ys = integrate_rk4(field, pack(s0.eta.value(), s0.theta_avg, s0.h), traj.times, tableau);
    const Eigen::Index n = s0.theta_avg.size();
    traj.states.reserve(ys.size());
    for (const auto& y : ys) {
        if (y.head(n) != s0.eta.value()) throw NumericError("integrate_dual_moments: eta drifted");
        traj.states.push_back({s0.eta, y.segment(n, n), y(2 * n)});
    }
    return traj;
}

ConsistencyReport consistency_check_primary(const StateSpace& model, const ThetaPoint& th, const Distribution& p0,
                                            double t_max, double dt, const Rk4Tableau& tableau) {
    Trajectory master = integrate(primary_field(model, th), p0, t_max, dt, tableau);
    attach_diagnostics(master, model, th);

    const PrimaryMomentState s0{th, master.diagnostics.front().expectations, master.diagnostics.front().psi_noneq};
    const auto moments = integrate_primary_moments(model, s0, t_max, dt, tableau);

    ConsistencyReport report;
    for (std::size_t k = 0; k < master.times.size(); ++k) {
        const auto& d = master.diagnostics[k];
        const auto& s = moments.states[k];
        report.max_moment_discrepancy = std::max(
            report.max_moment_discrepancy, (d.expectations - s.moments).lpNorm<Eigen::Infinity>());
        report.max_potential_discrepancy =
            std::max(report.max_potential_discrepancy, std::abs(d.psi_noneq - s.psi));
    }
    return report;
}

ConsistencyReport consistency_check_dual(const StateSpace& model, const EtaPoint& et, const Distribution& p0,
                                         double t_max, double dt, const Rk4Tableau& tableau) {
    const ThetaPoint th = theta_of_eta(model, et);
    const Distribution target = equilibrium_distribution(model, th);
    const Trajectory master = integrate(dual_field(model, et), p0, t_max, dt, tableau);

    // ⟨θ⟩_η has no microscopic definition; start it on its fixed point.
    const DualMomentState s0{et, th.value(), cross_entropy(target, p0)};
    const auto integrated = integrate_dual_moments(model, s0, t_max, dt, tableau);

    ConsistencyReport report;
    for (std::size_t k = 0; k < master.times.size(); ++k) {
        const double h = cross_entropy(target, master.states[k]);
        const double exact = dual_moment_exact(model, s0, master.times[k]).h;
        report.max_potential_discrepancy =
            std::max({report.max_potential_discrepancy, std::abs(h - exact), std::abs(h - integrated.states[k].h)});
    }
    return report;
}

void write_primary_moments_csv(std::ostream& os, const PrimaryMomentTrajectory& traj) {
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().theta.dim();
    std::vector<std::string> header{"t"};
    for (std::size_t a = 1; a <= n; ++a) header.push_back("theta_" + std::to_string(a));
    for (std::size_t a = 1; a <= n; ++a) header.push_back("moment_" + std::to_string(a));
    header.push_back("psi");
    csv::write_header(os, header);
    std::vector<double> row;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto& s = traj.states[k];
        row.assign(1, traj.times[k]);
        row.insert(row.end(), s.theta.value().data(), s.theta.value().data() + n);
        row.insert(row.end(), s.moments.data(), s.moments.data() + n);
        row.push_back(s.psi);
        csv::write_row(os, row);
    }
}

void write_dual_moments_csv(std::ostream& os, const DualMomentTrajectory& traj) {
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().eta.dim();
    std::vector<std::string> header{"t"};
    for (std::size_t a = 1; a <= n; ++a) header.push_back("eta_" + std::to_string(a));
    for (std::size_t a = 1; a <= n; ++a) header.push_back("theta_avg_" + std::to_string(a));
    header.push_back("H");
    csv::write_header(os, header);
    std::vector<double> row;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto& s = traj.states[k];
        row.assign(1, traj.times[k]);
        row.insert(row.end(), s.eta.value().data(), s.eta.value().data() + n);
        row.insert(row.end(), s.theta_avg.data(), s.theta_avg.data() + n);
        row.push_back(s.h);
        csv::write_row(os, row);
    }
}

}  // namespace mastergeo
