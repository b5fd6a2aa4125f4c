#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "mastergeo/exp_family.hpp"
#include "mastergeo/ode.hpp"

namespace mastergeo {

/// Jump probabilities per unit time; rates()(j, j') is the rate of j' → j.
/// The diagonal is ignored by the master equation.
class MarkovKernel {
public:
    explicit MarkovKernel(Matrix w);

    const Matrix& rates() const noexcept { return w_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(w_.rows()); }

private:
    Matrix w_;
};

/// dp_j/dt = Σ_{j'≠j} [w(j|j') p_j' − w(j'|j) p_j].
Vector general_master_rhs(const MarkovKernel& kernel, const Distribution& p);

/// The solvable kernel w(j|j') = p^eq_θ(j): every column is the equilibrium
/// distribution.
MarkovKernel solvable_kernel(const StateSpace& model, const ThetaPoint& th);

/// p^eq_θ − p.
Vector primary_rhs(const StateSpace& model, const ThetaPoint& th, const Distribution& p);

/// p^eq_{θ(η)} − p.
Vector dual_rhs(const StateSpace& model, const EtaPoint& et, const Distribution& p);

/// Vector-field forms of the right-hand sides above, acting on raw vectors so
/// that Runge–Kutta stages need not be valid distributions. The equilibrium
/// target is evaluated once at construction.
VectorField general_master_field(const MarkovKernel& kernel);
VectorField primary_field(const StateSpace& model, const ThetaPoint& th);
VectorField dual_field(const StateSpace& model, const EtaPoint& et);

/// e^{−t} p0 + (1 − e^{−t}) p_eq. Shared closed form of both solvable equations.
Distribution exact_solution(const Distribution& p0, const Distribution& p_eq, double t);

double expectation(const StateSpace& model, const Distribution& p, std::size_t a);
Vector expectations(const StateSpace& model, const Distribution& p);

/// Nonequilibrium Ψ(θ, t) = (1/|Γ|) Σ_j p_j / p^eq_θ(j) · Ψ^eq(θ).
double psi_noneq(const StateSpace& model, const ThetaPoint& th, const Distribution& p);

/// Σ_j p_j ln target_j. Throws DomainError if target has a zero component.
double cross_entropy(const Distribution& target, const Distribution& p);

/// D(p‖q) = Σ_j p_j ln(p_j / q_j) with 0 ln 0 = 0.
double kl_divergence(const Distribution& p, const Distribution& q);

struct TrajectoryDiagnostics {
    Vector expectations;
    double psi_noneq = 0.0;
    double cross_entropy = 0.0;
    double kl = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Distribution> states;
    /// Empty until attach_diagnostics() is called; then one entry per time.
    std::vector<TrajectoryDiagnostics> diagnostics;
};

/// Tolerance on |Σp − 1| and on negative components for integrated states.
inline constexpr double kIntegrationTolerance = 1e-9;

/// Fixed-step RK4 integration of dp/dt = rhs(p) on uniform_time_grid(t_max, dt).
/// No renormalization or clamping is applied; a component below −1e-9 or a
/// total-probability drift above 1e-9 raises NumericError.
Trajectory integrate(const VectorField& rhs, const Distribution& p0, double t_max, double dt,
                     const Rk4Tableau& tableau = Rk4Tableau::classical());

/// Computes per-time diagnostics from the stored states, relative to the
/// equilibrium distribution at θ.
void attach_diagnostics(Trajectory& traj, const StateSpace& model, const ThetaPoint& th);

/// Header `t,p_<label>...,obs_<a>...,psi_noneq,cross_entropy,kl`.
/// Diagnostics must be attached.
void write_trajectory_csv(std::ostream& os, const StateSpace& model, const Trajectory& traj);

}  // namespace mastergeo
