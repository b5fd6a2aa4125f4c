#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mastergeo/types.hpp"

namespace mastergeo {

/// Finite state space Γ together with the observable table O_a(j).
///
/// `observables()` is n × |Γ|: row a holds observable a, column j holds the
/// observable vector O(j) of state j. Immutable after construction.
class StateSpace {
public:
    StateSpace(std::vector<std::string> labels, Matrix observables);

    std::size_t num_states() const noexcept { return labels_.size(); }
    std::size_t num_observables() const noexcept {
        return static_cast<std::size_t>(observables_.rows());
    }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const Matrix& observables() const noexcept { return observables_; }
    Eigen::Ref<const Vector> column(std::size_t j) const {
        return observables_.col(static_cast<Eigen::Index>(j));
    }

    /// True when the centered observable rows are linearly dependent. The
    /// Fisher metric is then only positive semi-definite.
    bool degenerate() const noexcept { return rank_ < num_observables(); }
    std::size_t centered_rank() const noexcept { return rank_; }

private:
    std::vector<std::string> labels_;
    Matrix observables_;
    std::size_t rank_ = 0;
};

/// Natural parameters θ.
class ThetaPoint {
public:
    explicit ThetaPoint(Vector theta);
    ThetaPoint(std::initializer_list<double> theta);

    const Vector& value() const noexcept { return theta_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(theta_.size()); }
    double operator[](std::size_t a) const { return theta_(static_cast<Eigen::Index>(a)); }

private:
    Vector theta_;
};

class EtaPoint;
EtaPoint eta_of_theta(const StateSpace& model, const ThetaPoint& th);

/// Expectation parameters η, guaranteed to lie in the open interior of the
/// moment polytope of the model they were checked against.
class EtaPoint {
public:
    /// Throws ValidationError if η is not a strictly positive convex
    /// combination of the observable columns (margin 1e-9).
    EtaPoint(const StateSpace& model, Vector eta);

    const Vector& value() const noexcept { return eta_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(eta_.size()); }
    double operator[](std::size_t a) const { return eta_(static_cast<Eigen::Index>(a)); }

private:
    struct Trusted {};
    EtaPoint(Trusted, Vector eta) : eta_(std::move(eta)) {}
    friend EtaPoint eta_of_theta(const StateSpace&, const ThetaPoint&);

    Vector eta_;
};

/// Probability vector over Γ.
class Distribution {
public:
    static constexpr double kDefaultTolerance = 1e-12;

    /// `tol` bounds both |Σp − 1| and how far below zero a component may sit.
    explicit Distribution(Vector p, double tol = kDefaultTolerance);
    Distribution(std::initializer_list<double> p);

    const Vector& probabilities() const noexcept { return p_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(p_.size()); }
    double operator[](std::size_t j) const { return p_(static_cast<Eigen::Index>(j)); }
    bool strictly_positive() const noexcept { return strictly_positive_; }

    static Distribution uniform(std::size_t size);

private:
    Vector p_;
    bool strictly_positive_ = false;
};

/// Largest s such that `target` is a convex combination of the columns of
/// `columns` with every weight ≥ s. Returns −∞ when `target` lies outside
/// the convex hull.
double min_weight_margin(const Matrix& columns, const Vector& target);

double partition_function(const StateSpace& model, const ThetaPoint& th);

/// Log-partition function Ψ^eq(θ), the θ-potential.
double psi_eq(const StateSpace& model, const ThetaPoint& th);

Distribution equilibrium_distribution(const StateSpace& model, const ThetaPoint& th);

/// Equilibrium moments ∂Ψ^eq/∂θ^a = Σ_j O_a(j) p^eq_θ(j).
EtaPoint eta_of_theta(const StateSpace& model, const ThetaPoint& th);

/// Covariance of the observables under p^eq_θ, i.e. the Hessian of Ψ^eq.
Matrix fisher_metric(const StateSpace& model, const ThetaPoint& th);

/// Third central moments of the observables, i.e. ∂³Ψ^eq.
Tensor3 cubic_form(const StateSpace& model, const ThetaPoint& th);

/// Γ^(α) = ((1 − α)/2) · C in θ coordinates.
Tensor3 alpha_connection(const StateSpace& model, const ThetaPoint& th, double alpha);

/// Two spin states "+1", "-1" with observable O(σ) = σ.
StateSpace make_ising();

}  // namespace mastergeo
