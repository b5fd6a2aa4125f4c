#pragma once

#include <ostream>
#include <vector>

#include "mastergeo/exp_family.hpp"
#include "mastergeo/ode.hpp"

namespace mastergeo {

/// (θ, ⟨O_a⟩_θ, Ψ). Off equilibrium the moments are unconstrained by θ.
struct PrimaryMomentState {
    ThetaPoint theta;
    Vector moments;
    double psi = 0.0;
};

struct PrimaryMomentTangent {
    Vector dtheta;
    Vector dmoments;
    double dpsi = 0.0;
};

/// (η, ⟨θ^a⟩_η, H).
struct DualMomentState {
    EtaPoint eta;
    Vector theta_avg;
    double h = 0.0;
};

struct DualMomentTangent {
    Vector deta;
    Vector dtheta_avg;
    double dh = 0.0;
};

/// dθ/dt = 0, d⟨O⟩/dt = −⟨O⟩ + ∇Ψ^eq(θ), dΨ/dt = −Ψ + Ψ^eq(θ).
PrimaryMomentTangent primary_moment_rhs(const StateSpace& model, const PrimaryMomentState& s);

/// Closed-form solution: exponential interpolation toward (∇Ψ^eq(θ), Ψ^eq(θ)).
PrimaryMomentState primary_moment_exact(const StateSpace& model, const PrimaryMomentState& s0, double t);

/// d⟨θ⟩/dt = −⟨θ⟩ + ∇Φ^eq(η), dη/dt = 0, dH/dt = −H + Φ^eq(η).
DualMomentTangent dual_moment_rhs(const StateSpace& model, const DualMomentState& s);

DualMomentState dual_moment_exact(const StateSpace& model, const DualMomentState& s0, double t);

struct PrimaryMomentTrajectory {
    std::vector<double> times;
    std::vector<PrimaryMomentState> states;
};

struct DualMomentTrajectory {
    std::vector<double> times;
    std::vector<DualMomentState> states;
};

PrimaryMomentTrajectory integrate_primary_moments(const StateSpace& model, const PrimaryMomentState& s0,
                                                  double t_max, double dt,
                                                  const Rk4Tableau& tableau = Rk4Tableau::classical());

DualMomentTrajectory integrate_dual_moments(const StateSpace& model, const DualMomentState& s0,
                                            double t_max, double dt,
                                            const Rk4Tableau& tableau = Rk4Tableau::classical());

struct ConsistencyReport {
    double max_moment_discrepancy = 0.0;
    double max_potential_discrepancy = 0.0;

    double max_discrepancy() const {
        return max_moment_discrepancy > max_potential_discrepancy ? max_moment_discrepancy
                                                                  : max_potential_discrepancy;
    }
};

/// Integrates the primary master equation from p0, recomputes ⟨O_a⟩ and the
/// nonequilibrium Ψ from each distribution, and compares them with the
/// RK4-integrated moment system started from the same values.
ConsistencyReport consistency_check_primary(const StateSpace& model, const ThetaPoint& th, const Distribution& p0,
                                            double t_max, double dt,
                                            const Rk4Tableau& tableau = Rk4Tableau::classical());

/// Dual counterpart restricted to the H equation: H(η, t) recomputed as the
/// cross entropy along a dual master trajectory against the closed-form and
/// RK4-integrated dual moment system. `max_moment_discrepancy` stays 0.
ConsistencyReport consistency_check_dual(const StateSpace& model, const EtaPoint& et, const Distribution& p0,
                                         double t_max, double dt,
                                         const Rk4Tableau& tableau = Rk4Tableau::classical());

/// Header `t,theta_<a>...,moment_<a>...,psi`.
void write_primary_moments_csv(std::ostream& os, const PrimaryMomentTrajectory& traj);
/// Header `t,eta_<a>...,theta_avg_<a>...,H`.
void write_dual_moments_csv(std::ostream& os, const DualMomentTrajectory& traj);

}  // namespace mastergeo
