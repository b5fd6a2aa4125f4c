#include "mastergeo/legendre.hpp"

#include <cmath>
#include <string>

#include "mastergeo/error.hpp"

namespace mastergeo {

namespace {

void require_full_rank(const StateSpace& model) {
    if (model.degenerate()) {
        throw RankDeficientModelError(
            "rank-deficient model: centered observables have rank " +
            std::to_string(model.centered_rank()) + " < " +
            std::to_string(model.num_observables()) + "; Legendre inversion is undefined");
    }
}

Eigen::LDLT<Matrix> factor_metric(const Matrix& g, double singular_tolerance) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(g, Eigen::EigenvaluesOnly);
    const double smallest = eig.eigenvalues().minCoeff();
    if (!(smallest > singular_tolerance)) {
        throw RankDeficientModelError("rank-deficient model: Fisher metric is singular (smallest eigenvalue " +
                                      std::to_string(smallest) + ")");
    }
    return Eigen::LDLT<Matrix>(g);
}

}  // namespace

ThetaPoint theta_of_eta(const StateSpace& model, const EtaPoint& et, const NewtonOptions& opts) {
    require_full_rank(model);
    if (et.dim() != model.num_observables()) throw ValidationError("eta: dimension mismatch with model");

    const Eigen::Index n = static_cast<Eigen::Index>(model.num_observables());
    Vector theta = Vector::Zero(n);
    Vector residual = eta_of_theta(model, ThetaPoint(theta)).value() - et.value();

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        if (residual.lpNorm<Eigen::Infinity>() <= opts.tolerance * 1e-4) break;

        const Matrix g = fisher_metric(model, ThetaPoint(theta));
        const Vector step = factor_metric(g, opts.singular_tolerance).solve(residual);

        double scale = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= opts.max_halvings; ++halving, scale *= 0.5) {
            Vector trial = theta - scale * step;
            if (!trial.allFinite()) continue;
            Vector trial_residual;
            try {
                trial_residual = eta_of_theta(model, ThetaPoint(trial)).value() - et.value();
            } catch (const NumericError&) {
                continue;
            }
            if (trial_residual.norm() < residual.norm()) {
                theta = std::move(trial);
                residual = std::move(trial_residual);
                accepted = true;
                break;
            }
        }
        // No decrease at all: we are at the floating-point floor.
        if (!accepted) break;
    }

    const double res = residual.lpNorm<Eigen::Infinity>();
    if (!(res <= opts.tolerance)) {
        throw NonConvergenceError("theta_of_eta: Newton iteration did not converge", res);
    }
    return ThetaPoint(std::move(theta));
}

double phi_eq(const StateSpace& model, const EtaPoint& et) {
    const ThetaPoint th = theta_of_eta(model, et);
    return th.value().dot(et.value()) - psi_eq(model, th);
}

double h_eq(const StateSpace& model, const ThetaPoint& th) {
    const Distribution p = equilibrium_distribution(model, th);
    return (p.probabilities().array() * p.probabilities().array().log()).sum();
}

Vector grad_phi(const StateSpace& model, const EtaPoint& et) {
    return theta_of_eta(model, et).value();
}

Matrix hessian_phi(const StateSpace& model, const EtaPoint& et) {
    const Matrix g = fisher_metric(model, theta_of_eta(model, et));
    const auto ldlt = factor_metric(g, NewtonOptions{}.singular_tolerance);
    Matrix inv = ldlt.solve(Matrix::Identity(g.rows(), g.cols()));
    return 0.5 * (inv + inv.transpose());
}

}  // namespace mastergeo
