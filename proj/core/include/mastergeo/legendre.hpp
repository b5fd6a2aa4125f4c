#pragma once

#include "mastergeo/exp_family.hpp"

namespace mastergeo {

struct NewtonOptions {
    int max_iterations = 100;
    int max_halvings = 20;
    /// Required ‖∇Ψ^eq(θ) − η‖∞ at exit.
    double tolerance = 1e-10;
    /// Smallest Fisher eigenvalue treated as nonsingular.
    double singular_tolerance = 1e-12;
};

/// Inverts η = ∇Ψ^eq(θ) by damped Newton iteration started at θ = 0, using
/// the Fisher metric as Jacobian. Throws RankDeficientModelError for
/// degenerate models and NonConvergenceError when the residual stalls.
ThetaPoint theta_of_eta(const StateSpace& model, const EtaPoint& et,
                        const NewtonOptions& opts = {});

/// η-potential Φ^eq(η) = θ(η)·η − Ψ^eq(θ(η)), the Legendre transform of Ψ^eq.
double phi_eq(const StateSpace& model, const EtaPoint& et);

/// Equilibrium negative entropy Σ_j p^eq ln p^eq.
double h_eq(const StateSpace& model, const ThetaPoint& th);

/// ∂Φ^eq/∂η, which equals θ(η).
Vector grad_phi(const StateSpace& model, const EtaPoint& et);

/// ∂²Φ^eq/∂η², the inverse of the Fisher metric at θ(η).
Matrix hessian_phi(const StateSpace& model, const EtaPoint& et);

}  // namespace mastergeo
