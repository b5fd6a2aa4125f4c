#include "mastergeo/cli/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "mastergeo/contact.hpp"
#include "mastergeo/error.hpp"
#include "mastergeo/legendre.hpp"
#include "mastergeo/master.hpp"
#include "mastergeo/moments.hpp"
#include "mastergeo/random.hpp"

namespace mastergeo::cli {

namespace {

struct Outcome {
    double worst;
    double tolerance;
    bool strict = false;  ///< Require worst < tolerance instead of ≤.
};

struct Check {
    const char* module;
    const char* name;
    std::function<Outcome(const VerifyOptions&)> run;
};

// ---- fixtures -------------------------------------------------------------

StateSpace three_state() {
    Matrix o(1, 3);
    o << -1.0, 0.0, 1.0;
    return StateSpace({"a", "b", "c"}, o);
}

StateSpace pair_model() {
    Matrix o(2, 4);
    o << 1.0, -1.0, 0.5, 0.0,
         0.0, 1.0, 1.0, -1.0;
    return StateSpace({"s1", "s2", "s3", "s4"}, o);
}

StateSpace random_model() {
    Rng rng(2024);
    Matrix o(2, 5);
    for (Eigen::Index a = 0; a < 2; ++a)
        for (Eigen::Index j = 0; j < 5; ++j) o(a, j) = rng.normal();
    return StateSpace({"s1", "s2", "s3", "s4", "s5"}, o);
}

std::vector<Vector> theta_grid(std::size_t n, int points, double reach = 3.0) {
    std::vector<double> axis;
    for (int i = 0; i < points; ++i) axis.push_back(-reach + 2.0 * reach * i / (points - 1));
    std::vector<Vector> out;
    if (n == 1) {
        for (double a : axis) out.push_back(Vector::Constant(1, a));
    } else {
        for (double a : axis)
            for (double b : axis) out.push_back((Vector(2) << a, b).finished());
    }
    return out;
}

struct GridCase {
    StateSpace model;
    int points;
};

std::vector<GridCase> grid_cases() {
    return {{make_ising(), 25}, {three_state(), 25}, {pair_model(), 9}, {random_model(), 9}};
}

// Central differences of psi_eq, computed directly from exponent sums.
double log_partition(const StateSpace& m, const Vector& th) {
    const Vector e = m.observables().transpose() * th;
    const double shift = e.maxCoeff();
    return shift + std::log((e.array() - shift).exp().sum());
}

double fd_hessian_entry(const StateSpace& m, Vector th, Eigen::Index a, Eigen::Index b, double h) {
    const auto at = [&](double da, double db) {
        Vector x = th;
        x(a) += da;
        x(b) += db;
        return log_partition(m, x);
    };
    return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
}

double inf_norm(const Vector& v) { return v.lpNorm<Eigen::Infinity>(); }

// ---- exp_family -----------------------------------------------------------

Outcome check_gradient_fd(const VerifyOptions&) {
    double worst = 0.0;
    const double h = 1e-4;
    for (const auto& c : grid_cases()) {
        for (const Vector& th : theta_grid(c.model.num_observables(), c.points)) {
            const Vector eta = eta_of_theta(c.model, ThetaPoint(th)).value();
            for (Eigen::Index a = 0; a < th.size(); ++a) {
                Vector p = th, q = th;
                p(a) += h;
                q(a) -= h;
                worst = std::max(worst, std::abs(eta(a) - (log_partition(c.model, p) - log_partition(c.model, q)) / (2 * h)));
            }
        }
    }
    return {worst, 1e-6};
}

Outcome check_hessian_fd(const VerifyOptions&) {
    double worst = 0.0;
    for (const auto& c : grid_cases()) {
        for (const Vector& th : theta_grid(c.model.num_observables(), c.points)) {
            const Matrix g = fisher_metric(c.model, ThetaPoint(th));
            for (Eigen::Index a = 0; a < g.rows(); ++a)
                for (Eigen::Index b = 0; b < g.cols(); ++b)
                    worst = std::max(worst, std::abs(g(a, b) - fd_hessian_entry(c.model, th, a, b, 1e-4)));
        }
    }
    return {worst, 1e-5};
}

Outcome check_third_fd(const VerifyOptions&) {
    double worst = 0.0;
    const double h = 1e-3;
    for (const auto& c : grid_cases()) {
        for (const Vector& th : theta_grid(c.model.num_observables(), c.points)) {
            const Tensor3 cf = cubic_form(c.model, ThetaPoint(th));
            const auto n = static_cast<Eigen::Index>(cf.dim());
            for (Eigen::Index a = 0; a < n; ++a)
                for (Eigen::Index b = 0; b < n; ++b)
                    for (Eigen::Index d = 0; d < n; ++d) {
                        Vector p = th, q = th;
                        p(d) += h;
                        q(d) -= h;
                        const double fd =
                            (fd_hessian_entry(c.model, p, a, b, h) - fd_hessian_entry(c.model, q, a, b, h)) / (2 * h);
                        worst = std::max(worst, std::abs(cf(static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                                                             static_cast<std::size_t>(d)) - fd));
                    }
        }
    }
    return {worst, 1e-4};
}

Outcome check_fisher_psd(const VerifyOptions&) {
    double worst = 0.0;
    for (const auto& c : grid_cases()) {
        for (const Vector& th : theta_grid(c.model.num_observables(), c.points)) {
            const Matrix g = fisher_metric(c.model, ThetaPoint(th));
            Eigen::SelfAdjointEigenSolver<Matrix> eig(g, Eigen::EigenvaluesOnly);
            worst = std::max({worst, (g - g.transpose()).cwiseAbs().maxCoeff(), -eig.eigenvalues().minCoeff()});
        }
    }
    return {worst, 1e-12};
}

Outcome check_midpoint_convexity(const VerifyOptions&) {
    // Largest Ψ(mid) − chord over distinct pairs; must be negative.
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& c : grid_cases()) {
        const auto pts = theta_grid(c.model.num_observables(), c.model.num_observables() == 1 ? 25 : 5);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t k = i + 1; k < pts.size(); ++k) {
                const double mid = psi_eq(c.model, ThetaPoint(0.5 * (pts[i] + pts[k])));
                const double chord = 0.5 * (psi_eq(c.model, ThetaPoint(pts[i])) + psi_eq(c.model, ThetaPoint(pts[k])));
                worst = std::max(worst, mid - chord);
            }
    }
    return {worst, 0.0, true};
}

Outcome check_normalization(const VerifyOptions&) {
    double worst = 0.0;
    for (const auto& c : grid_cases()) {
        for (const Vector& th : theta_grid(c.model.num_observables(), c.points)) {
            const Distribution p = equilibrium_distribution(c.model, ThetaPoint(th));
            if (!p.strictly_positive()) return {std::numeric_limits<double>::infinity(), 1e-12};
            worst = std::max(worst, std::abs(p.probabilities().sum() - 1.0));
        }
    }
    return {worst, 1e-12};
}

Outcome check_cubic_symmetry(const VerifyOptions&) {
    double worst = 0.0;
    for (const auto& c : grid_cases()) {
        for (const Vector& th : theta_grid(c.model.num_observables(), c.points)) {
            const Tensor3 t = cubic_form(c.model, ThetaPoint(th));
            const std::size_t n = t.dim();
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    for (std::size_t d = 0; d < n; ++d)
                        for (double v : {t(a, d, b), t(b, a, d), t(b, d, a), t(d, a, b), t(d, b, a)})
                            worst = std::max(worst, std::abs(v - t(a, b, d)));
        }
    }
    return {worst, 1e-12};
}

Outcome check_ising_closed_forms(const VerifyOptions&) {
    const StateSpace ising = make_ising();
    double worst = 0.0;
    for (const Vector& th : theta_grid(1, 25)) {
        const double t = th(0);
        const double sech2 = 1.0 / (std::cosh(t) * std::cosh(t));
        const ThetaPoint tp(th);
        worst = std::max({worst, std::abs(psi_eq(ising, tp) - std::log(2.0 * std::cosh(t))),
                          std::abs(eta_of_theta(ising, tp)[0] - std::tanh(t)),
                          std::abs(fisher_metric(ising, tp)(0, 0) - sech2),
                          std::abs(cubic_form(ising, tp)(0, 0, 0) + 2.0 * sech2 * std::tanh(t))});
    }
    return {worst, 1e-10};
}

// ---- legendre -------------------------------------------------------------

template <class F>
double max_over_graph(F&& f) {
    double worst = 0.0;
    for (const auto& c : grid_cases()) {
        const int points = c.model.num_observables() == 1 ? 25 : 13;
        for (const Vector& th : theta_grid(c.model.num_observables(), points)) {
            const ThetaPoint tp(th);
            worst = std::max(worst, f(c.model, tp, eta_of_theta(c.model, tp)));
        }
    }
    return worst;
}

Outcome check_round_trip(const VerifyOptions&) {
    return {max_over_graph([](const StateSpace& m, const ThetaPoint& th, const EtaPoint& et) {
                return inf_norm(theta_of_eta(m, et).value() - th.value());
            }),
            1e-9};
}

Outcome check_fenchel_young_equality(const VerifyOptions&) {
    return {max_over_graph([](const StateSpace& m, const ThetaPoint& th, const EtaPoint& et) {
                return std::abs(th.value().dot(et.value()) - psi_eq(m, th) - phi_eq(m, et));
            }),
            1e-9};
}

Outcome check_fenchel_young_inequality(const VerifyOptions&) {
    Rng rng(99);
    double worst = -std::numeric_limits<double>::infinity();
    for (const StateSpace& m : {pair_model(), random_model()}) {
        for (int i = 0; i < 200; ++i) {
            const Vector th = (Vector(2) << rng.uniform(-3, 3), rng.uniform(-3, 3)).finished();
            const Vector other = (Vector(2) << rng.uniform(-3, 3), rng.uniform(-3, 3)).finished();
            const EtaPoint et = eta_of_theta(m, ThetaPoint(th));
            worst = std::max(worst, other.dot(et.value()) - psi_eq(m, ThetaPoint(other)) - phi_eq(m, et));
        }
    }
    return {worst, 1e-12};
}

Outcome check_pullback_metric(const VerifyOptions&) {
    return {max_over_graph([](const StateSpace& m, const ThetaPoint& th, const EtaPoint& et) {
                const Matrix g = fisher_metric(m, th);
                return (g.transpose() * hessian_phi(m, et) * g - g).cwiseAbs().maxCoeff();
            }),
            1e-7};
}

Outcome check_hessian_inverse(const VerifyOptions&) {
    return {max_over_graph([](const StateSpace& m, const ThetaPoint& th, const EtaPoint& et) {
                const Matrix g = fisher_metric(m, th);
                return (g * hessian_phi(m, et) - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
            }),
            1e-8};
}

Outcome check_phi_equals_h_eq(const VerifyOptions&) {
    return {max_over_graph([](const StateSpace& m, const ThetaPoint& th, const EtaPoint& et) {
                return std::abs(phi_eq(m, et) - h_eq(m, th));
            }),
            1e-9};
}

Outcome check_grad_phi_fd(const VerifyOptions&) {
    double worst = 0.0;
    const double h = 1e-4;
    for (const auto& c : grid_cases()) {
        const std::size_t n = c.model.num_observables();
        for (const Vector& th : theta_grid(n, 9, n == 1 ? 2.0 : 1.0)) {
            const EtaPoint et = eta_of_theta(c.model, ThetaPoint(th));
            const Vector g = grad_phi(c.model, et);
            for (Eigen::Index a = 0; a < th.size(); ++a) {
                Vector p = et.value(), q = et.value();
                p(a) += h;
                q(a) -= h;
                const double fd = (phi_eq(c.model, EtaPoint(c.model, p)) - phi_eq(c.model, EtaPoint(c.model, q))) / (2 * h);
                worst = std::max(worst, std::abs(g(a) - fd));
            }
        }
    }
    return {worst, 1e-6};
}

Outcome check_ising_phi_closed_form(const VerifyOptions&) {
    const StateSpace ising = make_ising();
    double worst = 0.0;
    for (const Vector& th : theta_grid(1, 25)) {
        const double e = std::tanh(th(0));
        const double closed = 0.5 * e * std::log((1 + e) / (1 - e)) + 0.5 * std::log(1 - e * e) - std::log(2.0);
        worst = std::max(worst, std::abs(phi_eq(ising, EtaPoint(ising, Vector::Constant(1, e))) - closed));
    }
    return {worst, 1e-10};
}

// ---- master ---------------------------------------------------------------

struct MasterCase {
    StateSpace model;
    ThetaPoint theta;
    Distribution p0;
};

std::vector<MasterCase> master_cases() {
    Rng rng(7);
    std::vector<MasterCase> out;
    out.push_back({make_ising(), ThetaPoint{1.0}, Distribution{1.0, 0.0}});
    out.push_back({three_state(), ThetaPoint{-0.6}, sample_simplex(rng, 3)});
    out.push_back({random_model(), ThetaPoint{0.5, -0.8}, sample_simplex(rng, 5)});
    return out;
}

template <class F>
double over_trajectories(const VerifyOptions& opts, F&& f) {
    double worst = 0.0;
    for (const auto& c : master_cases()) {
        Trajectory traj = integrate(primary_field(c.model, c.theta), c.p0, 10.0, 1e-3, opts.tableau);
        attach_diagnostics(traj, c.model, c.theta);
        worst = std::max(worst, f(c, traj));
    }
    return worst;
}

Outcome check_kernel_reduction(const VerifyOptions&) {
    Rng rng(17);
    const StateSpace m = random_model();
    const ThetaPoint th{0.3, 1.2};
    const MarkovKernel k = solvable_kernel(m, th);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Distribution p = sample_simplex(rng, 5);
        worst = std::max(worst, inf_norm(general_master_rhs(k, p) - primary_rhs(m, th, p)));
    }
    return {worst, 1e-12};
}

Outcome check_rhs_conservation(const VerifyOptions&) {
    Rng rng(19);
    const StateSpace m = random_model();
    const ThetaPoint th{-1.0, 0.4};
    const EtaPoint et = eta_of_theta(m, th);
    const MarkovKernel k = solvable_kernel(m, th);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Distribution p = sample_simplex(rng, 5);
        worst = std::max({worst, std::abs(primary_rhs(m, th, p).sum()), std::abs(dual_rhs(m, et, p).sum()),
                          std::abs(general_master_rhs(k, p).sum())});
    }
    return {worst, 1e-12};
}

Outcome check_oracle_primary(const VerifyOptions& opts) {
    return {over_trajectories(opts,
                              [](const MasterCase& c, const Trajectory& traj) {
                                  const Distribution peq = equilibrium_distribution(c.model, c.theta);
                                  double w = 0.0;
                                  for (std::size_t k = 0; k < traj.times.size(); ++k)
                                      w = std::max(w, inf_norm(traj.states[k].probabilities() -
                                                               exact_solution(c.p0, peq, traj.times[k]).probabilities()));
                                  return w;
                              }),
            1e-8};
}

Outcome check_oracle_dual(const VerifyOptions& opts) {
    double worst = 0.0;
    for (const auto& c : master_cases()) {
        const EtaPoint et = eta_of_theta(c.model, c.theta);
        const Distribution peq = equilibrium_distribution(c.model, theta_of_eta(c.model, et));
        const Trajectory traj = integrate(dual_field(c.model, et), c.p0, 10.0, 1e-3, opts.tableau);
        for (std::size_t k = 0; k < traj.times.size(); ++k)
            worst = std::max(worst, inf_norm(traj.states[k].probabilities() -
                                             exact_solution(c.p0, peq, traj.times[k]).probabilities()));
    }
    return {worst, 1e-8};
}

Outcome check_probability_conservation(const VerifyOptions& opts) {
    return {over_trajectories(opts,
                              [](const MasterCase&, const Trajectory& traj) {
                                  double w = 0.0;
                                  for (const auto& p : traj.states) w = std::max(w, std::abs(p.probabilities().sum() - 1.0));
                                  return w;
                              }),
            1e-9};
}

Outcome check_kl_monotonicity(const VerifyOptions& opts) {
    return {over_trajectories(opts,
                              [](const MasterCase&, const Trajectory& traj) {
                                  double w = 0.0;
                                  for (std::size_t k = 1; k < traj.diagnostics.size(); ++k)
                                      w = std::max(w, traj.diagnostics[k].kl - traj.diagnostics[k - 1].kl);
                                  w = std::max(w, -traj.diagnostics.back().kl);
                                  return w;
                              }),
            1e-12};
}

Outcome check_positivity(const VerifyOptions& opts) {
    return {over_trajectories(opts,
                              [](const MasterCase&, const Trajectory& traj) {
                                  double w = 0.0;
                                  for (const auto& p : traj.states) w = std::max(w, -p.probabilities().minCoeff());
                                  return w;
                              }),
            1e-9};
}

Outcome check_exponential_convergence(const VerifyOptions& opts) {
    return {over_trajectories(opts,
                              [](const MasterCase& c, const Trajectory& traj) {
                                  const Vector peq = equilibrium_distribution(c.model, c.theta).probabilities();
                                  const double d0 = inf_norm(c.p0.probabilities() - peq);
                                  double w = 0.0;
                                  for (std::size_t k = 0; k < traj.times.size(); k += 100) {
                                      const double expected = std::exp(-traj.times[k]) * d0;
                                      w = std::max(w, std::abs(inf_norm(traj.states[k].probabilities() - peq) - expected) /
                                                          expected);
                                  }
                                  return w;
                              }),
            1e-6};
}

// ---- moments --------------------------------------------------------------

Outcome check_fixed_points(const VerifyOptions&) {
    double worst = 0.0;
    for (const auto& c : grid_cases()) {
        for (const Vector& th : theta_grid(c.model.num_observables(), 5)) {
            const ThetaPoint tp(th);
            const auto t = primary_moment_rhs(c.model, {tp, eta_of_theta(c.model, tp).value(), psi_eq(c.model, tp)});
            worst = std::max({worst, inf_norm(t.dmoments), std::abs(t.dpsi)});
            const EtaPoint et = eta_of_theta(c.model, tp);
            const auto d = dual_moment_rhs(c.model, {et, th, h_eq(c.model, tp)});
            worst = std::max({worst, inf_norm(d.dtheta_avg), std::abs(d.dh)});
        }
    }
    return {worst, 1e-10};
}

Outcome check_moments_exact_vs_rk4(const VerifyOptions& opts) {
    double worst = 0.0;
    const StateSpace m = pair_model();
    const PrimaryMomentState s0{ThetaPoint{0.4, -0.2}, (Vector(2) << 0.9, -0.7).finished(), 1.5};
    const auto traj = integrate_primary_moments(m, s0, 10.0, 1e-3, opts.tableau);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto ex = primary_moment_exact(m, s0, traj.times[k]);
        worst = std::max({worst, inf_norm(traj.states[k].moments - ex.moments), std::abs(traj.states[k].psi - ex.psi)});
    }
    const DualMomentState d0{EtaPoint(m, (Vector(2) << 0.1, 0.2).finished()), (Vector(2) << -1.0, 2.0).finished(), -0.3};
    const auto dual = integrate_dual_moments(m, d0, 10.0, 1e-3, opts.tableau);
    for (std::size_t k = 0; k < dual.times.size(); ++k) {
        const auto ex = dual_moment_exact(m, d0, dual.times[k]);
        worst = std::max({worst, inf_norm(dual.states[k].theta_avg - ex.theta_avg), std::abs(dual.states[k].h - ex.h)});
    }
    return {worst, 1e-8};
}

Outcome check_static_coordinates(const VerifyOptions& opts) {
    const StateSpace m = pair_model();
    const PrimaryMomentState s0{ThetaPoint{0.4, -0.2}, Vector::Zero(2), 0.0};
    double changed = 0.0;
    for (const auto& s : integrate_primary_moments(m, s0, 2.0, 1e-2, opts.tableau).states)
        changed += s.theta.value() != s0.theta.value();
    const DualMomentState d0{EtaPoint(m, (Vector(2) << 0.1, 0.2).finished()), Vector::Zero(2), 0.0};
    for (const auto& s : integrate_dual_moments(m, d0, 2.0, 1e-2, opts.tableau).states)
        changed += s.eta.value() != d0.eta.value();
    return {changed, 0.0};
}

Outcome check_consistency_primary(const VerifyOptions& opts) {
    double worst = 0.0;
    for (const auto& c : master_cases())
        worst = std::max(worst, consistency_check_primary(c.model, c.theta, c.p0, 10.0, 1e-3, opts.tableau).max_discrepancy());
    return {worst, 1e-7};
}

Outcome check_consistency_dual(const VerifyOptions& opts) {
    double worst = 0.0;
    for (const auto& c : master_cases()) {
        const EtaPoint et = eta_of_theta(c.model, c.theta);
        worst = std::max(worst, consistency_check_dual(c.model, et, c.p0, 10.0, 1e-3, opts.tableau).max_discrepancy());
    }
    return {worst, 1e-7};
}

// ---- contact --------------------------------------------------------------

ContactPoint random_point(Rng& rng, std::size_t n, double spread) {
    ContactPoint pt{Vector(n), Vector(n), rng.uniform(-spread, spread)};
    for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(n); ++a) {
        pt.x(a) = rng.uniform(-spread, spread);
        pt.y(a) = rng.uniform(-spread, spread);
    }
    return pt;
}

double tangent_gap(const ContactTangent& a, const ContactTangent& b) {
    return std::max({inf_norm(a.dx - b.dx), inf_norm(a.dy - b.dy), std::abs(a.dz - b.dz)});
}

Outcome check_specialization(bool numeric) {
    const StateSpace m = pair_model();
    const Potential w = psi_potential(m);
    const ContactHamiltonian h = numeric ? ContactHamiltonian::with_numeric_partials(
                                               [&w](const ContactPoint& pt) { return w.value(pt.x) - pt.z; })
                                         : relaxation_hamiltonian(w);
    Rng rng(numeric ? 31 : 37);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const ContactPoint pt = random_point(rng, 2, 2.0);
        worst = std::max(worst, tangent_gap(general_contact_field(h, pt), relaxation_field(w, pt)));
    }
    return {worst, numeric ? 1e-5 : 1e-10};
}

Outcome check_manifold_invariance(const VerifyOptions&) {
    const Potential w = psi_potential(pair_model());
    double worst = 0.0;
    for (const Vector& x : theta_grid(2, 5)) {
        const ContactPoint on = legendre_submanifold_point(w, x);
        for (double t : {0.5, 1.0, 5.0}) {
            const ContactPoint later = flow_exact(w, on, t);
            worst = std::max({worst, inf_norm(later.y - on.y), std::abs(later.z - on.z)});
        }
        worst = std::max(worst, tangent_gap(relaxation_field(w, on), {Vector::Zero(2), Vector::Zero(2), 0.0}));
    }
    return {worst, 0.0};
}

Outcome check_attractor_decay(const VerifyOptions&) {
    const Potential w = psi_potential(pair_model());
    Rng rng(41);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const ContactPoint p0 = random_point(rng, 2, 2.0);
        const Vector grad = w.gradient(p0.x);
        const double value = w.value(p0.x);
        for (double t : {0.5, 1.0, 2.0, 5.0}) {
            const ContactPoint pt = flow_exact(w, p0, t);
            const double decay = std::exp(-t);
            for (Eigen::Index a = 0; a < 2; ++a) {
                const double d0 = p0.y(a) - grad(a);
                if (std::abs(d0) > 1e-3) worst = std::max(worst, std::abs((pt.y(a) - grad(a)) / (decay * d0) - 1.0));
            }
            const double z0 = p0.z - value;
            if (std::abs(z0) > 1e-3) worst = std::max(worst, std::abs((pt.z - value) / (decay * z0) - 1.0));
        }
    }
    return {worst, 1e-9};
}

Outcome check_hamiltonian_decay(const VerifyOptions&) {
    const Potential w = psi_potential(make_ising());
    Rng rng(43);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const ContactPoint p0 = random_point(rng, 1, 2.0);
        const double h0 = hamiltonian_value(w, p0);
        for (double t : {0.5, 1.0, 2.0})
            worst = std::max(worst, std::abs(hamiltonian_value(w, flow_exact(w, p0, t)) / (std::exp(-t) * h0) - 1.0));
    }
    return {worst, 1e-10};
}

Outcome check_volume_form(const VerifyOptions&) {
    Rng rng(47);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) worst = std::max(worst, std::abs(std::abs(contact_volume_coefficient(random_point(rng, 1, 5.0))) - 1.0));
    return {worst, 1e-8};
}

Outcome check_identification(bool dual) {
    const StateSpace m = pair_model();
    const Potential w = dual ? phi_potential(m) : psi_potential(m);
    Rng rng(dual ? 53 : 59);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const ThetaPoint th{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const Vector avg = (Vector(2) << rng.uniform(-2, 2), rng.uniform(-2, 2)).finished();
        const double pot = rng.uniform(-2, 2);
        if (dual) {
            const EtaPoint et = eta_of_theta(m, th);
            const auto d = dual_moment_rhs(m, {et, avg, pot});
            worst = std::max(worst, tangent_gap(relaxation_field(w, {et.value(), avg, pot}), {d.deta, d.dtheta_avg, d.dh}));
        } else {
            const auto p = primary_moment_rhs(m, {th, avg, pot});
            worst = std::max(worst, tangent_gap(relaxation_field(w, {th.value(), avg, pot}), {p.dtheta, p.dmoments, p.dpsi}));
        }
    }
    return {worst, dual ? 1e-9 : 1e-12};
}

Outcome check_length_equals_h(const VerifyOptions&) {
    double worst = 0.0;
    Rng rng(61);
    for (const Potential& w : {psi_potential(make_ising()), phi_potential(make_ising())}) {
        for (int i = 0; i < 10; ++i) {
            ContactPoint p0 = random_point(rng, 1, 2.0);
            p0.x(0) = rng.uniform(-0.9, 0.9);
            for (double t : {0.0, 0.5, 2.0}) {
                worst = std::max(worst, std::abs(curve_length(w, p0, t) -
                                                 std::abs(hamiltonian_value(w, flow_exact(w, p0, t)))));
            }
        }
    }
    return {worst, 1e-8};
}

Outcome check_length_decay_rate(const VerifyOptions&) {
    const Potential w = psi_potential(make_ising());
    const ContactPoint p0{Vector::Constant(1, 1.0), Vector::Zero(1), 0.0};
    std::vector<double> times, lengths;
    for (int k = 0; k <= 20; ++k) {
        times.push_back(0.5 * k);
        lengths.push_back(curve_length(w, p0, times.back()));
    }
    return {std::abs(fitted_log_rate(times, lengths) + 1.0), 1e-3};
}

Outcome check_flow_rk4(const VerifyOptions& opts) {
    const Potential w = psi_potential(pair_model());
    const ContactPoint p0{(Vector(2) << 0.5, -1.0).finished(), (Vector(2) << 2.0, -2.0).finished(), 3.0};
    const auto traj = integrate_relaxation(w, p0, 10.0, 1e-3, opts.tableau);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const ContactPoint ex = flow_exact(w, p0, traj.times[k]);
        worst = std::max({worst, inf_norm(traj.states[k].y - ex.y), std::abs(traj.states[k].z - ex.z)});
    }
    return {worst, 1e-8};
}

const std::vector<Check>& catalog() {
    static const std::vector<Check> checks{
        {"exp_family", "gradient_vs_finite_difference", check_gradient_fd},
        {"exp_family", "hessian_vs_finite_difference", check_hessian_fd},
        {"exp_family", "third_derivative_vs_finite_difference", check_third_fd},
        {"exp_family", "fisher_symmetric_psd", check_fisher_psd},
        {"exp_family", "psi_midpoint_convexity", check_midpoint_convexity},
        {"exp_family", "equilibrium_normalization", check_normalization},
        {"exp_family", "cubic_form_symmetry", check_cubic_symmetry},
        {"exp_family", "ising_closed_forms", check_ising_closed_forms},
        {"legendre", "round_trip", check_round_trip},
        {"legendre", "fenchel_young_equality", check_fenchel_young_equality},
        {"legendre", "fenchel_young_inequality", check_fenchel_young_inequality},
        {"legendre", "pullback_metric", check_pullback_metric},
        {"legendre", "hessian_inverse", check_hessian_inverse},
        {"legendre", "phi_equals_h_eq", check_phi_equals_h_eq},
        {"legendre", "grad_phi_vs_finite_difference", check_grad_phi_fd},
        {"legendre", "ising_phi_closed_form", check_ising_phi_closed_form},
        {"master", "kernel_reduction", check_kernel_reduction},
        {"master", "rhs_conservation", check_rhs_conservation},
        {"master", "oracle_equivalence_primary", check_oracle_primary},
        {"master", "oracle_equivalence_dual", check_oracle_dual},
        {"master", "probability_conservation", check_probability_conservation},
        {"master", "kl_monotonicity", check_kl_monotonicity},
        {"master", "positivity", check_positivity},
        {"master", "exponential_convergence", check_exponential_convergence},
        {"moments", "fixed_points", check_fixed_points},
        {"moments", "static_coordinates", check_static_coordinates},
        {"moments", "exact_vs_rk4", check_moments_exact_vs_rk4},
        {"moments", "consistency_primary", check_consistency_primary},
        {"moments", "consistency_dual_h", check_consistency_dual},
        {"contact", "specialization_analytic", [](const VerifyOptions&) { return check_specialization(false); }},
        {"contact", "specialization_numeric", [](const VerifyOptions&) { return check_specialization(true); }},
        {"contact", "manifold_invariance", check_manifold_invariance},
        {"contact", "attractor_decay", check_attractor_decay},
        {"contact", "hamiltonian_decay", check_hamiltonian_decay},
        {"contact", "volume_form_nondegenerate", check_volume_form},
        {"contact", "primary_moment_identification", [](const VerifyOptions&) { return check_identification(false); }},
        {"contact", "dual_moment_identification", [](const VerifyOptions&) { return check_identification(true); }},
        {"contact", "rk4_vs_exact_flow", check_flow_rk4},
        {"contact", "length_equals_abs_h", check_length_equals_h},
        {"contact", "length_decay_rate", check_length_decay_rate},
    };
    return checks;
}

CheckResult execute(const Check& check, const VerifyOptions& opts) {
    CheckResult r{check.module, check.name, 0.0, 0.0, false, {}};
    try {
        const Outcome o = check.run(opts);
        r.worst = o.worst;
        r.tolerance = o.tolerance;
        r.passed = std::isfinite(o.worst) && (o.strict ? o.worst < o.tolerance : o.worst <= o.tolerance);
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

}  // namespace

const std::vector<std::string>& verify_modules() {
    static const std::vector<std::string> modules{"exp_family", "legendre", "master", "moments", "contact"};
    return modules;
}

std::vector<CheckResult> run_verification(const std::string& scope, const VerifyOptions& opts) {
    const auto& modules = verify_modules();
    if (scope != "all" && std::find(modules.begin(), modules.end(), scope) == modules.end()) {
        throw ValidationError("verify: unknown scope '" + scope + "' (all, exp_family, legendre, master, moments, contact)");
    }
    std::vector<const Check*> selected;
    for (const auto& c : catalog()) {
        if (scope == "all" || scope == c.module) selected.push_back(&c);
    }

    std::vector<CheckResult> results(selected.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < selected.size(); i = next++) results[i] = execute(*selected[i], opts);
    };
    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(selected.size()));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    return results;
}

bool print_verification(std::ostream& os, const std::vector<CheckResult>& results) {
    std::size_t passed = 0;
    for (const auto& r : results) {
        char line[256];
        if (r.error.empty()) {
            std::snprintf(line, sizeof line, "%s %s.%s worst=%.3e tol=%.1e", r.passed ? "PASS" : "FAIL",
                          r.module.c_str(), r.name.c_str(), r.worst, r.tolerance);
            os << line << '\n';
        } else {
            os << "FAIL " << r.module << '.' << r.name << " error=" << r.error << '\n';
        }
        passed += r.passed;
    }
    os << "verify: " << passed << '/' << results.size() << " checks passed\n";
    return passed == results.size();
}

}  // namespace mastergeo::cli
