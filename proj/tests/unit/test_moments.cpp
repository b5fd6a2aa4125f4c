#include <cmath>

#include "doctest.h"
#include "mastergeo/error.hpp"
#include "mastergeo/legendre.hpp"
#include "mastergeo/master.hpp"
#include "mastergeo/moments.hpp"
#include "mastergeo/random.hpp"
#include "oracles.hpp"

using namespace mastergeo;

namespace {

StateSpace three_state() {
    Matrix o(1, 3);
    o << -1.0, 0.0, 1.0;
    return StateSpace({"a", "b", "c"}, o);
}

}  // namespace

TEST_CASE("primary moment right-hand side") {
    const StateSpace ising = make_ising();
    const ThetaPoint th{1.0};
    const PrimaryMomentState eq{th, eta_of_theta(ising, th).value(), psi_eq(ising, th)};
    const auto zero = primary_moment_rhs(ising, eq);
    CHECK(zero.dmoments.lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(zero.dpsi == 0.0);

    const auto t = primary_moment_rhs(ising, {th, Vector::Zero(1), 0.0});
    CHECK(t.dtheta(0) == 0.0);
    CHECK(t.dmoments(0) == doctest::Approx(std::tanh(1.0)).epsilon(1e-14));
    CHECK(t.dpsi == doctest::Approx(oracle::ising_psi(1.0)).epsilon(1e-14));

    CHECK_THROWS_AS(primary_moment_rhs(ising, {th, Vector::Zero(2), 0.0}), ValidationError);
}

TEST_CASE("primary moment closed form") {
    const StateSpace ising = make_ising();
    const PrimaryMomentState s0{ThetaPoint{1.0}, Vector::Constant(1, -0.4), 0.2};
    const auto at0 = primary_moment_exact(ising, s0, 0.0);
    CHECK(at0.moments(0) == doctest::Approx(-0.4).epsilon(1e-15));
    CHECK(at0.psi == doctest::Approx(0.2).epsilon(1e-15));

    const auto late = primary_moment_exact(ising, s0, 40.0);
    CHECK(std::abs(late.moments(0) - std::tanh(1.0)) <= 1e-12);
    CHECK(std::abs(late.psi - oracle::ising_psi(1.0)) <= 1e-12);

    const auto mid = primary_moment_exact(ising, s0, std::log(2.0));
    CHECK(mid.moments(0) == doctest::Approx(0.5 * (-0.4 + std::tanh(1.0))).epsilon(1e-14));
    CHECK(mid.psi == doctest::Approx(0.5 * (0.2 + oracle::ising_psi(1.0))).epsilon(1e-14));
    CHECK_THROWS_AS(primary_moment_exact(ising, s0, -0.1), ValidationError);
}

TEST_CASE("dual moment system") {
    const StateSpace ising = make_ising();
    const EtaPoint et(ising, Vector::Constant(1, 0.5));
    const double theta_eq = oracle::ising_theta_of_eta(0.5);
    const double phi = oracle::ising_phi(0.5);

    const auto zero = dual_moment_rhs(ising, {et, Vector::Constant(1, theta_eq), phi});
    CHECK(std::abs(zero.dtheta_avg(0)) <= 1e-12);
    CHECK(std::abs(zero.dh) <= 1e-12);

    const auto t = dual_moment_rhs(ising, {et, Vector::Zero(1), 0.0});
    CHECK(t.deta(0) == 0.0);
    CHECK(t.dtheta_avg(0) == doctest::Approx(theta_eq).epsilon(1e-12));
    CHECK(t.dh == doctest::Approx(phi).epsilon(1e-12));

    const DualMomentState s0{et, Vector::Zero(1), 0.0};
    CHECK(dual_moment_exact(ising, s0, 0.0).h == 0.0);
    const auto late = dual_moment_exact(ising, s0, 40.0);
    CHECK(std::abs(late.theta_avg(0) - theta_eq) <= 1e-12);
    CHECK(std::abs(late.h - phi) <= 1e-12);
    CHECK(dual_moment_exact(ising, s0, 1.0).h == doctest::Approx((1.0 - std::exp(-1.0)) * phi).epsilon(1e-12));
}

TEST_CASE("fixed points are exactly the Legendre graph") {
    Rng rng(2);
    const StateSpace m = three_state();
    for (int i = 0; i < 50; ++i) {
        const ThetaPoint th{rng.uniform(-2, 2)};
        const Vector eta = eta_of_theta(m, th).value();
        const double psi = psi_eq(m, th);
        const auto on = primary_moment_rhs(m, {th, eta, psi});
        CHECK(on.dmoments.norm() + std::abs(on.dpsi) <= 1e-10);
        const auto off = primary_moment_rhs(m, {th, eta + Vector::Constant(1, 1e-6), psi});
        CHECK(off.dmoments.norm() + std::abs(off.dpsi) > 1e-10);
    }
}

TEST_CASE("RK4 moment trajectories match closed forms and keep static coordinates") {
    const StateSpace m = three_state();
    const PrimaryMomentState s0{ThetaPoint{0.7}, Vector::Constant(1, 0.9), -1.0};
    const auto traj = integrate_primary_moments(m, s0, 10.0, 1e-3);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto exact = primary_moment_exact(m, s0, traj.times[k]);
        worst = std::max({worst, std::abs(traj.states[k].moments(0) - exact.moments(0)),
                          std::abs(traj.states[k].psi - exact.psi)});
        CHECK(traj.states[k].theta.value() == s0.theta.value());
    }
    CHECK(worst <= 1e-8);

    const DualMomentState d0{EtaPoint(m, Vector::Constant(1, -0.3)), Vector::Constant(1, 2.0), 0.5};
    const auto dual = integrate_dual_moments(m, d0, 10.0, 1e-3);
    worst = 0.0;
    for (std::size_t k = 0; k < dual.times.size(); ++k) {
        const auto exact = dual_moment_exact(m, d0, dual.times[k]);
        worst = std::max({worst, std::abs(dual.states[k].theta_avg(0) - exact.theta_avg(0)),
                          std::abs(dual.states[k].h - exact.h)});
        CHECK(dual.states[k].eta.value() == d0.eta.value());
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("consistency with distribution-level dynamics") {
    const StateSpace ising = make_ising();
    CHECK(consistency_check_primary(ising, {1.0}, Distribution{1.0, 0.0}, 10.0, 1e-3).max_discrepancy() <= 1e-7);
    CHECK(consistency_check_primary(ising, {1.0}, equilibrium_distribution(ising, {1.0}), 10.0, 1e-3)
              .max_discrepancy() <= 1e-12);

    Rng rng(9);
    const StateSpace m = three_state();
    for (int i = 0; i < 3; ++i) {
        const auto report = consistency_check_primary(m, {rng.uniform(-1, 1)}, sample_simplex(rng, 3), 10.0, 1e-3);
        CHECK(report.max_discrepancy() <= 1e-7);
        const auto dual = consistency_check_dual(m, EtaPoint(m, Vector::Constant(1, rng.uniform(-0.8, 0.8))),
                                                 sample_simplex(rng, 3), 10.0, 1e-3);
        CHECK(dual.max_discrepancy() <= 1e-7);
    }
}

TEST_CASE("moment CSV headers") {
    const StateSpace ising = make_ising();
    std::ostringstream p, d;
    write_primary_moments_csv(p, integrate_primary_moments(ising, {ThetaPoint{1.0}, Vector::Zero(1), 0.0}, 0.1, 0.1));
    write_dual_moments_csv(
        d, integrate_dual_moments(ising, {EtaPoint(ising, Vector::Zero(1)), Vector::Zero(1), 0.0}, 0.1, 0.1));
    CHECK(p.str().rfind("t,theta_1,moment_1,psi\n0,1,0,0\n", 0) == 0);
    CHECK(d.str().rfind("t,eta_1,theta_avg_1,H\n", 0) == 0);
}
