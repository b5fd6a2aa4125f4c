// Acceptance suite: one PASS/FAIL line per criterion. Reference values come
// from tests/oracles.hpp (brute-force sums and closed forms), not from the
// library's own helpers.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mastergeo/cli/app.hpp"
#include "mastergeo/mastergeo.hpp"
#include "oracles.hpp"

using namespace mastergeo;
namespace fs = std::filesystem;

namespace {

struct Measure {
    std::string what;
    double worst;
    double tolerance;
};

struct Criterion {
    int id;
    std::string title;
    std::function<std::vector<Measure>()> run;
};

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }
Vector to_eigen(const std::vector<double>& v) { return Vector::Map(v.data(), static_cast<Eigen::Index>(v.size())); }

oracle::Table table_of(const StateSpace& m) {
    oracle::Table t;
    for (Eigen::Index a = 0; a < m.observables().rows(); ++a) t.rows.push_back(to_std(m.observables().row(a)));
    return t;
}

std::vector<double> oracle_eta(const oracle::Table& t, const std::vector<double>& th) {
    const auto w = t.weights(th);
    std::vector<double> eta(t.rows.size(), 0.0);
    for (std::size_t a = 0; a < t.rows.size(); ++a)
        for (std::size_t j = 0; j < w.size(); ++j) eta[a] += t.rows[a][j] * w[j];
    return eta;
}

double oracle_kl(const std::vector<double>& p, const std::vector<double>& q) {
    double d = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j)
        if (p[j] > 0.0) d += p[j] * std::log(p[j] / q[j]);
    return d;
}

StateSpace random_five_state() {
    Rng rng(20240601);
    Matrix o(2, 5);
    for (Eigen::Index a = 0; a < 2; ++a)
        for (Eigen::Index j = 0; j < 5; ++j) o(a, j) = rng.uniform(-1.5, 1.5);
    return StateSpace({"s1", "s2", "s3", "s4", "s5"}, o);
}

StateSpace two_observable() {
    Matrix o(2, 4);
    o << 1.0, -1.0, 0.5, 0.0,
         0.0, 1.0, 1.0, -1.0;
    return StateSpace({"s1", "s2", "s3", "s4"}, o);
}

std::vector<std::vector<double>> grid(std::size_t n, int points) {
    std::vector<double> axis;
    for (int i = 0; i < points; ++i) axis.push_back(-3.0 + 6.0 * i / (points - 1));
    std::vector<std::vector<double>> out;
    if (n == 1) {
        for (double a : axis) out.push_back({a});
    } else {
        for (double a : axis)
            for (double b : axis) out.push_back({a, b});
    }
    return out;
}

struct Scenario {
    StateSpace model;
    std::vector<double> theta;
    std::vector<double> p0;
};

std::vector<Scenario> master_scenarios() {
    return {{make_ising(), {1.0}, {1.0, 0.0}},
            {make_ising(), {-0.7}, {0.25, 0.75}},
            {random_five_state(), {0.8, -0.5}, {0.05, 0.4, 0.1, 0.3, 0.15}},
            {random_five_state(), {-1.2, 0.9}, {0.0, 0.0, 1.0, 0.0, 0.0}}};
}

double max_abs(double a, double b) { return std::max(a, std::abs(b)); }

// ---- 1 --------------------------------------------------------------------

std::vector<Measure> exact_solution_oracle() {
    double primary = 0.0, dual = 0.0;
    for (const auto& s : master_scenarios()) {
        const oracle::Table tab = table_of(s.model);
        const auto peq = tab.weights(s.theta);
        const Distribution p0(to_eigen(s.p0));
        const ThetaPoint th(to_eigen(s.theta));
        const EtaPoint et(s.model, to_eigen(oracle_eta(tab, s.theta)));
        const Trajectory tp = integrate(primary_field(s.model, th), p0, 10.0, 1e-3);
        const Trajectory td = integrate(dual_field(s.model, et), p0, 10.0, 1e-3);
        for (std::size_t k = 0; k < tp.times.size(); ++k) {
            const double e = std::exp(-tp.times[k]);
            for (std::size_t j = 0; j < peq.size(); ++j) {
                const double exact = e * s.p0[j] + (1.0 - e) * peq[j];
                primary = max_abs(primary, tp.states[k].probabilities()(static_cast<Eigen::Index>(j)) - exact);
                dual = max_abs(dual, td.states[k].probabilities()(static_cast<Eigen::Index>(j)) - exact);
            }
        }
    }
    return {{"primary", primary, 1e-8}, {"dual", dual, 1e-8}};
}

// ---- 2 --------------------------------------------------------------------

std::vector<Measure> kernel_reduction() {
    double worst = 0.0;
    Rng rng(4242);
    for (const auto& s : master_scenarios()) {
        const auto peq = table_of(s.model).weights(s.theta);
        const std::size_t n = peq.size();
        Matrix w(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t jp = 0; jp < n; ++jp) w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(jp)) = peq[j];
        const MarkovKernel kernel(w);
        for (int i = 0; i < 100; ++i) {
            const Distribution p = sample_simplex(rng, n);
            const Vector rhs = general_master_rhs(kernel, p);
            for (std::size_t j = 0; j < n; ++j) {
                const auto jj = static_cast<Eigen::Index>(j);
                worst = max_abs(worst, rhs(jj) - (peq[j] - p.probabilities()(jj)));
            }
        }
    }
    return {{"general_vs_peq_minus_p", worst, 1e-12}};
}

// ---- 3 --------------------------------------------------------------------

std::vector<Measure> legendre_suite() {
    double round_trip = 0.0, fenchel = 0.0, inverse = 0.0, phi_h = 0.0;
    for (const StateSpace& m : {make_ising(), two_observable(), random_five_state()}) {
        const oracle::Table tab = table_of(m);
        const std::size_t n = m.num_observables();
        for (const auto& th : grid(n, n == 1 ? 61 : 13)) {
            const auto eta = oracle_eta(tab, th);
            const EtaPoint et(m, to_eigen(eta));
            const Vector back = theta_of_eta(m, et).value();
            double dot = 0.0;
            for (std::size_t a = 0; a < n; ++a) {
                round_trip = max_abs(round_trip, back(static_cast<Eigen::Index>(a)) - th[a]);
                dot += th[a] * eta[a];
            }
            const double phi = phi_eq(m, et);
            fenchel = max_abs(fenchel, dot - tab.log_partition(th) - phi);

            const auto w = tab.weights(th);
            double neg_entropy = 0.0;
            for (double p : w) neg_entropy += p * std::log(p);
            phi_h = max_abs(phi_h, phi - neg_entropy);

            // Fisher metric as the brute-force covariance of the observables.
            Matrix g = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    for (std::size_t j = 0; j < w.size(); ++j)
                        g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                            w[j] * (tab.rows[a][j] - eta[a]) * (tab.rows[b][j] - eta[b]);
            const Matrix prod = g * hessian_phi(m, et);
            for (Eigen::Index a = 0; a < prod.rows(); ++a)
                for (Eigen::Index b = 0; b < prod.cols(); ++b) inverse = max_abs(inverse, prod(a, b) - (a == b ? 1.0 : 0.0));
        }
    }
    return {{"round_trip", round_trip, 1e-9},
            {"fenchel_young", fenchel, 1e-9},
            {"hessian_inverse", inverse, 1e-8},
            {"phi_equals_h_eq", phi_h, 1e-9}};
}

// ---- 4 --------------------------------------------------------------------

std::vector<Measure> ising_closed_forms() {
    const StateSpace ising = make_ising();
    double psi = 0.0, eta = 0.0, g = 0.0, phi = 0.0, c = 0.0;
    for (const auto& th : grid(1, 25)) {
        const ThetaPoint tp(to_eigen(th));
        psi = max_abs(psi, psi_eq(ising, tp) - oracle::ising_psi(th[0]));
        eta = max_abs(eta, eta_of_theta(ising, tp)[0] - oracle::ising_eta(th[0]));
        g = max_abs(g, fisher_metric(ising, tp)(0, 0) - oracle::ising_fisher(th[0]));
        c = max_abs(c, cubic_form(ising, tp)(0, 0, 0) - oracle::ising_cubic(th[0]));
    }
    for (int i = 0; i < 25; ++i) {
        const double e = -0.96 + 1.92 * i / 24;
        phi = max_abs(phi, phi_eq(ising, EtaPoint(ising, Vector::Constant(1, e))) - oracle::ising_phi(e));
    }
    return {{"psi", psi, 1e-10}, {"eta", eta, 1e-10}, {"fisher", g, 1e-10}, {"phi", phi, 1e-10}, {"cubic", c, 1e-10}};
}

// ---- 5 --------------------------------------------------------------------

std::vector<Measure> moment_systems() {
    double primary_exact = 0.0, dual_exact = 0.0, primary_master = 0.0, dual_master = 0.0;
    const StateSpace m = two_observable();
    const oracle::Table tab = table_of(m);
    const std::vector<double> th{0.6, -0.4};
    const auto eta = oracle_eta(tab, th);
    const double psi = tab.log_partition(th);

    const PrimaryMomentState s0{ThetaPoint(to_eigen(th)), (Vector(2) << -0.9, 0.7).finished(), 2.5};
    const auto ptraj = integrate_primary_moments(m, s0, 10.0, 1e-3);
    for (std::size_t k = 0; k < ptraj.times.size(); ++k) {
        const double e = std::exp(-ptraj.times[k]);
        for (Eigen::Index a = 0; a < 2; ++a)
            primary_exact = max_abs(primary_exact,
                                    ptraj.states[k].moments(a) - (e * s0.moments(a) + (1 - e) * eta[static_cast<std::size_t>(a)]));
        primary_exact = max_abs(primary_exact, ptraj.states[k].psi - (e * s0.psi + (1 - e) * psi));
    }

    double neg_entropy = 0.0;
    for (double p : tab.weights(th)) neg_entropy += p * std::log(p);
    const DualMomentState d0{EtaPoint(m, to_eigen(eta)), (Vector(2) << 1.5, -2.0).finished(), -0.1};
    const auto dtraj = integrate_dual_moments(m, d0, 10.0, 1e-3);
    for (std::size_t k = 0; k < dtraj.times.size(); ++k) {
        const double e = std::exp(-dtraj.times[k]);
        for (Eigen::Index a = 0; a < 2; ++a)
            dual_exact = max_abs(dual_exact,
                                 dtraj.states[k].theta_avg(a) - (e * d0.theta_avg(a) + (1 - e) * th[static_cast<std::size_t>(a)]));
        dual_exact = max_abs(dual_exact, dtraj.states[k].h - (e * d0.h + (1 - e) * neg_entropy));
    }

    for (const auto& s : master_scenarios()) {
        const Distribution p0(to_eigen(s.p0));
        primary_master = std::max(
            primary_master, consistency_check_primary(s.model, ThetaPoint(to_eigen(s.theta)), p0, 10.0, 1e-3).max_discrepancy());
        const EtaPoint et(s.model, to_eigen(oracle_eta(table_of(s.model), s.theta)));
        dual_master = std::max(dual_master, consistency_check_dual(s.model, et, p0, 10.0, 1e-3).max_discrepancy());
    }
    return {{"primary_ode_vs_closed_form", primary_exact, 1e-8},
            {"dual_ode_vs_closed_form", dual_exact, 1e-8},
            {"primary_master_vs_ode", primary_master, 1e-7},
            {"dual_H_master_vs_ode", dual_master, 1e-7}};
}

// ---- 6 --------------------------------------------------------------------

double tangent_gap(const ContactTangent& a, const ContactTangent& b) {
    return std::max({(a.dx - b.dx).lpNorm<Eigen::Infinity>(), (a.dy - b.dy).lpNorm<Eigen::Infinity>(), std::abs(a.dz - b.dz)});
}

std::vector<Measure> contact_layer() {
    const StateSpace m = two_observable();
    const oracle::Table tab = table_of(m);
    const Potential psi = psi_potential(m);
    const Potential phi = phi_potential(m);
    Rng rng(777);
    const auto draw = [&rng](double lo, double hi) { return (Vector(2) << rng.uniform(lo, hi), rng.uniform(lo, hi)).finished(); };

    double specialization = 0.0, fixed = 0.0, decay = 0.0, primary = 0.0, dual = 0.0;
    const ContactHamiltonian h = relaxation_hamiltonian(psi);
    for (int i = 0; i < 100; ++i) {
        const ContactPoint pt{draw(-2, 2), draw(-2, 2), rng.uniform(-2, 2)};
        specialization = std::max(specialization, tangent_gap(general_contact_field(h, pt), relaxation_field(psi, pt)));
    }
    for (const auto& th : grid(2, 7)) {
        const ContactPoint on = legendre_submanifold_point(psi, to_eigen(th));
        const ContactTangent v = relaxation_field(psi, on);
        fixed = std::max({fixed, v.dx.lpNorm<Eigen::Infinity>(), v.dy.lpNorm<Eigen::Infinity>(), std::abs(v.dz)});
    }
    for (int i = 0; i < 50; ++i) {
        const ContactPoint p0{draw(-2, 2), draw(-2, 2), rng.uniform(-2, 2)};
        const double h0 = tab.log_partition(to_std(p0.x)) - p0.z;
        for (double t : {0.5, 1.0, 2.0})
            decay = std::max(decay, std::abs(hamiltonian_value(psi, flow_exact(psi, p0, t)) / (std::exp(-t) * h0) - 1.0));
    }
    for (int i = 0; i < 50; ++i) {
        const Vector th = draw(-2, 2), avg = draw(-2, 2);
        const double pot = rng.uniform(-2, 2);
        const auto eta = oracle_eta(tab, to_std(th));
        // Primary moment system: dθ = 0, d⟨O⟩ = −⟨O⟩ + η(θ), dΨ = −Ψ + Ψ^eq(θ).
        const ContactTangent pv = relaxation_field(psi, {th, avg, pot});
        primary = std::max({primary, pv.dx.lpNorm<Eigen::Infinity>(), std::abs(pv.dz - (-pot + tab.log_partition(to_std(th))))});
        for (Eigen::Index a = 0; a < 2; ++a) primary = max_abs(primary, pv.dy(a) - (-avg(a) + eta[static_cast<std::size_t>(a)]));
        // Dual: dη = 0, d⟨θ⟩ = −⟨θ⟩ + θ(η), dH = −H + Φ^eq(η).
        double neg_entropy = 0.0;
        for (double p : tab.weights(to_std(th))) neg_entropy += p * std::log(p);
        const ContactTangent dv = relaxation_field(phi, {to_eigen(eta), avg, pot});
        dual = std::max({dual, dv.dx.lpNorm<Eigen::Infinity>(), std::abs(dv.dz - (-pot + neg_entropy))});
        for (Eigen::Index a = 0; a < 2; ++a) dual = max_abs(dual, dv.dy(a) - (-avg(a) + th(a)));
    }
    return {{"general_field_specialization", specialization, 1e-10},
            {"submanifold_fixed_points", fixed, 0.0},
            {"h_decay_relative", decay, 1e-10},
            {"primary_identification", primary, 1e-12},
            {"dual_identification", dual, 1e-9}};
}

// ---- 7 --------------------------------------------------------------------

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

std::vector<Measure> length_to_equilibrium() {
    const StateSpace ising = make_ising();
    const oracle::Table tab = table_of(ising);
    double length_vs_h = 0.0, rate = 0.0;
    const std::vector<ContactPoint> starts{{Vector::Constant(1, 1.0), Vector::Constant(1, -0.5), 0.0},
                                           {Vector::Constant(1, -0.3), Vector::Constant(1, 2.0), 1.5},
                                           {Vector::Constant(1, 2.0), Vector::Constant(1, 0.1), -1.0}};
    for (const ContactPoint& p0 : starts) {
        const double h0 = tab.log_partition(to_std(p0.x)) - p0.z;
        std::vector<double> times, logs;
        for (int k = 0; k <= 20; ++k) {
            const double t = 0.5 * k;
            const double len = curve_length(psi_potential(ising), p0, t);
            length_vs_h = max_abs(length_vs_h, len - std::abs(std::exp(-t) * h0));
            times.push_back(t);
            logs.push_back(std::log(len));
        }
        rate = max_abs(rate, least_squares_slope(times, logs) + 1.0);
    }
    return {{"length_equals_abs_h", length_vs_h, 1e-8}, {"fitted_rate_plus_one", rate, 1e-3}};
}

// ---- 8 --------------------------------------------------------------------

std::vector<Measure> kl_monotonicity() {
    double increase = 0.0, negative = 0.0, at_equilibrium = 0.0;
    for (const auto& s : master_scenarios()) {
        const auto peq = table_of(s.model).weights(s.theta);
        const Trajectory traj = integrate(primary_field(s.model, ThetaPoint(to_eigen(s.theta))), Distribution(to_eigen(s.p0)), 10.0, 1e-3);
        double prev = oracle_kl(s.p0, peq);
        for (const auto& p : traj.states) {
            const double d = oracle_kl(to_std(p.probabilities()), peq);
            increase = std::max(increase, d - prev);
            negative = std::max(negative, -d);
            prev = d;
        }
        const Distribution eq(to_eigen(peq));
        at_equilibrium = max_abs(at_equilibrium, kl_divergence(eq, eq));
    }
    return {{"max_step_increase", increase, 1e-12}, {"max_negative", negative, 0.0}, {"self_divergence", at_equilibrium, 0.0}};
}

// ---- 9 --------------------------------------------------------------------

std::vector<Measure> derivative_cross_checks() {
    double gradient = 0.0, hessian = 0.0, third = 0.0, pullback = 0.0;
    for (const StateSpace& m : {make_ising(), two_observable(), random_five_state()}) {
        const oracle::Table tab = table_of(m);
        const oracle::ScalarFn f = [&tab](const std::vector<double>& th) { return tab.log_partition(th); };
        const std::size_t n = m.num_observables();
        for (const auto& th : grid(n, n == 1 ? 25 : 9)) {
            const ThetaPoint tp(to_eigen(th));
            const Vector eta = eta_of_theta(m, tp).value();
            const Matrix g = fisher_metric(m, tp);
            const Tensor3 c = cubic_form(m, tp);
            const auto fd_g = oracle::fd_gradient(f, th);
            const auto fd_h = oracle::fd_hessian(f, th);
            for (std::size_t a = 0; a < n; ++a) {
                const auto ia = static_cast<Eigen::Index>(a);
                gradient = max_abs(gradient, eta(ia) - fd_g[a]);
                for (std::size_t b = 0; b < n; ++b) {
                    hessian = max_abs(hessian, g(ia, static_cast<Eigen::Index>(b)) - fd_h[a][b]);
                    for (std::size_t d = 0; d < n; ++d) third = max_abs(third, c(a, b, d) - oracle::fd_third(f, th, a, b, d));
                }
            }
            // Jacobian of θ ↦ η is the Fisher metric; Hessian of Φ is taken at η(θ).
            const Matrix gphi = hessian_phi(m, EtaPoint(m, to_eigen(oracle_eta(tab, th))));
            pullback = std::max(pullback, (g.transpose() * gphi * g - g).cwiseAbs().maxCoeff());
        }
    }
    return {{"gradient", gradient, 1e-6}, {"hessian", hessian, 1e-5}, {"third", third, 1e-4}, {"pullback", pullback, 1e-7}};
}

// ---- 10 -------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<Measure> determinism() {
    const fs::path dir = fs::temp_directory_path() / "mastergeo_acceptance";
    fs::create_directories(dir);
    double differing = 0.0;
    for (const char* mode : {"primary-master", "dual-moments", "contact-psi"}) {
        const bool eta_mode = std::string(mode) == "dual-moments";
        nlohmann::json cfg = {{"model",
                               {{"type", "custom"},
                                {"labels", {"a", "b", "c", "d"}},
                                {"observables", {{1.0, -1.0, 0.5, 0.0}, {0.0, 1.0, 1.0, -1.0}}}}},
                              {"mode", mode},
                              {eta_mode ? "eta" : "theta", {0.2, -0.1}},
                              {"initial", {{"random", true}}},
                              {"t_max", 5.0},
                              {"dt", 1e-2},
                              {"seed", 31337}};
        const fs::path cfg_path = dir / (std::string(mode) + ".json");
        std::ofstream(cfg_path) << cfg.dump();
        std::vector<std::string> outputs;
        for (int run = 0; run < 3; ++run) {
            const fs::path out = dir / (std::string(mode) + "_" + std::to_string(run) + ".csv");
            std::ostringstream sink, err;
            if (cli::run_cli({"simulate", cfg_path.string(), "--output", out.string()}, sink, err) != 0) return {{"exit", 1, 0}};
            outputs.push_back(slurp(out));
        }
        for (const auto& o : outputs) differing += (o != outputs.front() || o.empty());
    }
    return {{"differing_outputs", differing, 0.0}};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "exact-solution oracle for primary and dual master equations", exact_solution_oracle},
        {2, "general master equation reduces to p_eq - p", kernel_reduction},
        {3, "Legendre duality suite", legendre_suite},
        {4, "Ising closed forms", ising_closed_forms},
        {5, "moment-system exactness", moment_systems},
        {6, "contact layer", contact_layer},
        {7, "length to equilibrium equals |h| and decays at rate -1", length_to_equilibrium},
        {8, "KL monotonicity", kl_monotonicity},
        {9, "derivative cross-checks", derivative_cross_checks},
        {10, "determinism of seeded simulate", determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        bool pass = true;
        try {
            for (const Measure& m : c.run()) {
                const bool ok = std::isfinite(m.worst) && m.worst <= m.tolerance;
                pass = pass && ok;
                char buf[160];
                std::snprintf(buf, sizeof buf, " %s=%.3e/%.0e%s", m.what.c_str(), m.worst, m.tolerance, ok ? "" : "!");
                detail += buf;
            }
        } catch (const std::exception& e) {
            pass = false;
            detail = std::string(" error: ") + e.what();
        }
        failures += !pass;
        std::printf("%s [%2d] %s:%s\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(), detail.c_str());
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
    return failures == 0 ? 0 : 1;
}
