#include "mastergeo/exp_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mastergeo/error.hpp"

namespace mastergeo {

namespace {

constexpr double kInteriorMargin = 1e-9;
constexpr double kRankTolerance = 1e-10;

bool all_finite(const Eigen::Ref<const Matrix>& m) { return m.allFinite(); }

void check_dims(const StateSpace& model, const ThetaPoint& th) {
    if (th.dim() != model.num_observables()) {
        throw ValidationError("theta has dimension " + std::to_string(th.dim()) +
                              ", model has " + std::to_string(model.num_observables()) +
                              " observables");
    }
}

// Exponents θ·O(j) for every state.
Vector exponents(const StateSpace& model, const ThetaPoint& th) {
    check_dims(model, th);
    return model.observables().transpose() * th.value();
}

// Dense two-phase tableau simplex for: maximize cᵀv, A v = b, v ≥ 0.
// Bland's rule; only meant for the handful of variables a state space has.
class TableauSimplex {
public:
    TableauSimplex(const Matrix& a, const Vector& b, const Vector& c)
        : rows_(a.rows()), cols_(a.cols()) {
        // Columns: structural | artificial | rhs.
        tab_ = Matrix::Zero(rows_ + 1, cols_ + rows_ + 1);
        for (Eigen::Index i = 0; i < rows_; ++i) {
            const double sign = b(i) < 0 ? -1.0 : 1.0;
            tab_.row(i).head(cols_) = sign * a.row(i);
            tab_(i, cols_ + i) = 1.0;
            tab_(i, rhs()) = sign * b(i);
        }
        basis_.resize(static_cast<std::size_t>(rows_));
        for (Eigen::Index i = 0; i < rows_; ++i) basis_[static_cast<std::size_t>(i)] = cols_ + i;
        objective_ = c;
    }

    // Returns the optimum, or -inf when infeasible.
    double solve() {
        // Phase I: maximize −Σ artificials.
        Vector phase1 = Vector::Zero(cols_ + rows_);
        phase1.tail(rows_).setConstant(-1.0);
        set_objective(phase1);
        run(cols_ + rows_);
        if (-tab_(rows_, rhs()) > kFeasibilityTol) return -std::numeric_limits<double>::infinity();

        // Drive remaining artificials out of the basis where possible.
        for (Eigen::Index i = 0; i < rows_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < cols_) continue;
            for (Eigen::Index j = 0; j < cols_; ++j) {
                if (std::abs(tab_(i, j)) > kPivotTol) {
                    pivot(i, j);
                    break;
                }
            }
        }

        Vector phase2 = Vector::Zero(cols_ + rows_);
        phase2.head(cols_) = objective_;
        set_objective(phase2);
        run(cols_);
        return tab_(rows_, rhs());
    }

private:
    static constexpr double kPivotTol = 1e-12;
    static constexpr double kFeasibilityTol = 1e-10;

    Eigen::Index rhs() const { return cols_ + rows_; }

    // Objective row stores reduced costs as −c_j + c_Bᵀ B⁻¹ A_j and the
    // current value in the rhs slot.
    void set_objective(const Vector& c) {
        tab_.row(rows_).setZero();
        tab_.row(rows_).head(cols_ + rows_) = -c.transpose();
        for (Eigen::Index i = 0; i < rows_; ++i) {
            const double cb = c(basis_[static_cast<std::size_t>(i)]);
            if (cb != 0.0) tab_.row(rows_) += cb * tab_.row(i);
        }
    }

    void run(Eigen::Index allowed_cols) {
        for (int iter = 0; iter < 10000; ++iter) {
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < allowed_cols; ++j) {
                if (tab_(rows_, j) < -kPivotTol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return;
            Eigen::Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < rows_; ++i) {
                if (tab_(i, enter) > kPivotTol) {
                    const double ratio = tab_(i, rhs()) / tab_(i, enter);
                    if (ratio < best - 1e-15 ||
                        (std::abs(ratio - best) <= 1e-15 &&
                         basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) throw NumericError("moment polytope test: unbounded program");
            pivot(leave, enter);
        }
        throw NumericError("moment polytope test: simplex iteration limit");
    }

    void pivot(Eigen::Index r, Eigen::Index c) {
        tab_.row(r) /= tab_(r, c);
        for (Eigen::Index i = 0; i <= rows_; ++i) {
            if (i != r && tab_(i, c) != 0.0) tab_.row(i) -= tab_(i, c) * tab_.row(r);
        }
        basis_[static_cast<std::size_t>(r)] = c;
    }

    Eigen::Index rows_;
    Eigen::Index cols_;
    Matrix tab_;
    std::vector<Eigen::Index> basis_;
    Vector objective_;
};

}  // namespace

StateSpace::StateSpace(std::vector<std::string> labels, Matrix observables)
    : labels_(std::move(labels)), observables_(std::move(observables)) {
    if (labels_.size() < 2) throw ValidationError("labels: a state space needs at least 2 states");
    if (observables_.rows() < 1) throw ValidationError("observables: at least one observable row is required");
    if (static_cast<std::size_t>(observables_.cols()) != labels_.size()) {
        throw ValidationError("observables: each row must have " + std::to_string(labels_.size()) +
                              " entries (one per label), got " + std::to_string(observables_.cols()));
    }
    if (!all_finite(observables_)) throw ValidationError("observables: entries must be finite");
    std::set<std::string> seen;
    for (const auto& l : labels_) {
        if (!seen.insert(l).second) throw ValidationError("labels: duplicate label '" + l + "'");
    }

    Matrix centered = observables_.colwise() - observables_.rowwise().mean();
    Eigen::JacobiSVD<Matrix> svd(centered);
    const auto& sv = svd.singularValues();
    const double scale = std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    rank_ = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > kRankTolerance * scale) ++rank_;
    }
}

ThetaPoint::ThetaPoint(Vector theta) : theta_(std::move(theta)) {
    if (theta_.size() < 1) throw ValidationError("theta: must have at least one component");
    if (!theta_.allFinite()) throw ValidationError("theta: entries must be finite");
}

ThetaPoint::ThetaPoint(std::initializer_list<double> theta)
    : ThetaPoint(Vector::Map(theta.begin(), static_cast<Eigen::Index>(theta.size()))) {}

double min_weight_margin(const Matrix& columns, const Vector& target) {
    // Weights w_j = u_j + s with u ≥ 0, s ≥ 0; maximize s.
    const Eigen::Index n = columns.rows();
    const Eigen::Index states = columns.cols();
    Matrix a(n + 1, states + 1);
    a.row(0).head(states).setOnes();
    a(0, states) = static_cast<double>(states);
    a.bottomLeftCorner(n, states) = columns;
    a.bottomRightCorner(n, 1) = columns.rowwise().sum();
    Vector b(n + 1);
    b(0) = 1.0;
    b.tail(n) = target;
    Vector c = Vector::Zero(states + 1);
    c(states) = 1.0;
    return TableauSimplex(a, b, c).solve();
}

EtaPoint::EtaPoint(const StateSpace& model, Vector eta) : eta_(std::move(eta)) {
    if (dim() != model.num_observables()) {
        throw ValidationError("eta: has dimension " + std::to_string(dim()) + ", model has " +
                              std::to_string(model.num_observables()) + " observables");
    }
    if (!eta_.allFinite()) throw ValidationError("eta: entries must be finite");
    if (!(min_weight_margin(model.observables(), eta_) > kInteriorMargin)) {
        throw ValidationError("eta: not in the open interior of the moment polytope");
    }
}

Distribution::Distribution(Vector p, double tol) : p_(std::move(p)) {
    if (p_.size() < 1) throw ValidationError("distribution: empty probability vector");
    if (!p_.allFinite()) throw ValidationError("distribution: entries must be finite");
    if (p_.minCoeff() < -tol) throw ValidationError("distribution: negative probability");
    if (std::abs(p_.sum() - 1.0) > tol) {
        throw ValidationError("distribution: probabilities sum to " + std::to_string(p_.sum()) +
                              ", expected 1");
    }
    strictly_positive_ = p_.minCoeff() > 0.0;
}

Distribution::Distribution(std::initializer_list<double> p)
    : Distribution(Vector::Map(p.begin(), static_cast<Eigen::Index>(p.size()))) {}

Distribution Distribution::uniform(std::size_t size) {
    return Distribution(Vector::Constant(static_cast<Eigen::Index>(size), 1.0 / static_cast<double>(size)));
}

double partition_function(const StateSpace& model, const ThetaPoint& th) {
    const Vector e = exponents(model, th);
    const double shift = e.maxCoeff();
    const double scaled = (e.array() - shift).exp().sum();
    const double z = std::exp(shift) * scaled;
    if (!std::isfinite(z) || z <= 0.0) throw NumericError("partition function: parameter out of numeric range");
    return z;
}

double psi_eq(const StateSpace& model, const ThetaPoint& th) {
    const Vector e = exponents(model, th);
    const double shift = e.maxCoeff();
    const double value = shift + std::log((e.array() - shift).exp().sum());
    if (!std::isfinite(value)) throw NumericError("psi_eq: parameter out of numeric range");
    return value;
}

Distribution equilibrium_distribution(const StateSpace& model, const ThetaPoint& th) {
    const Vector e = exponents(model, th);
    const double shift = e.maxCoeff();
    Vector w = (e.array() - shift).exp();
    w /= w.sum();
    if (!(w.minCoeff() > 0.0)) {
        throw NumericError("equilibrium distribution: parameter out of numeric range (underflow)");
    }
    return Distribution(std::move(w));
}

EtaPoint eta_of_theta(const StateSpace& model, const ThetaPoint& th) {
    const Distribution p = equilibrium_distribution(model, th);
    return EtaPoint(EtaPoint::Trusted{}, model.observables() * p.probabilities());
}

Matrix fisher_metric(const StateSpace& model, const ThetaPoint& th) {
    const Distribution p = equilibrium_distribution(model, th);
    const Vector mean = model.observables() * p.probabilities();
    const Matrix centered = model.observables().colwise() - mean;
    Matrix g = centered * p.probabilities().asDiagonal() * centered.transpose();
    // Exact symmetry regardless of summation order.
    return 0.5 * (g + g.transpose());
}

Tensor3 cubic_form(const StateSpace& model, const ThetaPoint& th) {
    const Distribution p = equilibrium_distribution(model, th);
    const Vector mean = model.observables() * p.probabilities();
    const Matrix centered = model.observables().colwise() - mean;
    const std::size_t n = model.num_observables();
    Tensor3 c(n);
    // Fill the sorted index triples once and mirror them so every permutation
    // holds the bit-identical value.
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            for (std::size_t d = b; d < n; ++d) {
                double sum = 0.0;
                for (std::size_t j = 0; j < model.num_states(); ++j) {
                    const auto jj = static_cast<Eigen::Index>(j);
                    sum += p[j] * centered(static_cast<Eigen::Index>(a), jj) *
                           centered(static_cast<Eigen::Index>(b), jj) *
                           centered(static_cast<Eigen::Index>(d), jj);
                }
                c(a, b, d) = c(a, d, b) = c(b, a, d) = c(b, d, a) = c(d, a, b) = c(d, b, a) = sum;
            }
        }
    }
    return c;
}

Tensor3 alpha_connection(const StateSpace& model, const ThetaPoint& th, double alpha) {
    Tensor3 c = 0.5 * (1.0 - alpha) * cubic_form(model, th);
    for (std::size_t a = 0; a < c.dim(); ++a)
        for (std::size_t b = 0; b < c.dim(); ++b)
            for (std::size_t d = 0; d < c.dim(); ++d) c(a, b, d) += 0.0;  // -0 → +0
    return c;
}

StateSpace make_ising() {
    Matrix o(1, 2);
    o << 1.0, -1.0;
    return StateSpace({"+1", "-1"}, std::move(o));
}

}  // namespace mastergeo
