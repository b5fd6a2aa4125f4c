#include "mastergeo/master.hpp"

#include <cmath>
#include <string>

#include "mastergeo/csv.hpp"
#include "mastergeo/error.hpp"
#include "mastergeo/legendre.hpp"

namespace mastergeo {

namespace {

void check_sizes(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got) {
        throw ValidationError(std::string(what) + ": dimension mismatch (expected " + std::to_string(expected) +
                              ", got " + std::to_string(got) + ")");
    }
}

}  // namespace

MarkovKernel::MarkovKernel(Matrix w) : w_(std::move(w)) {
    if (w_.rows() != w_.cols() || w_.rows() < 2) throw ValidationError("kernel: must be a square matrix of size >= 2");
    if (!w_.allFinite() || w_.minCoeff() < 0.0 || w_.maxCoeff() > 1.0) {
        throw ValidationError("kernel: entries must lie in [0, 1]");
    }
}

namespace {

Vector apply_kernel(const Matrix& w, const Vector& p) {
    const Eigen::Index m = w.rows();
    Vector out = Vector::Zero(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        double gain = 0.0;
        double loss = 0.0;
        for (Eigen::Index k = 0; k < m; ++k) {
            if (k == j) continue;
            gain += w(j, k) * p(k);
            loss += w(k, j);
        }
        out(j) = gain - loss * p(j);
    }
    return out;
}

}  // namespace

Vector general_master_rhs(const MarkovKernel& kernel, const Distribution& p) {
    check_sizes(kernel.size(), p.size(), "general_master_rhs");
    return apply_kernel(kernel.rates(), p.probabilities());
}

VectorField general_master_field(const MarkovKernel& kernel) {
    return [w = kernel.rates()](const Vector& p) {
        check_sizes(static_cast<std::size_t>(w.rows()), static_cast<std::size_t>(p.size()), "general_master_field");
        return apply_kernel(w, p);
    };
}

VectorField primary_field(const StateSpace& model, const ThetaPoint& th) {
    return [peq = equilibrium_distribution(model, th).probabilities()](const Vector& p) -> Vector {
        check_sizes(static_cast<std::size_t>(peq.size()), static_cast<std::size_t>(p.size()), "primary_field");
        return peq - p;
    };
}

VectorField dual_field(const StateSpace& model, const EtaPoint& et) {
    return primary_field(model, theta_of_eta(model, et));
}

MarkovKernel solvable_kernel(const StateSpace& model, const ThetaPoint& th) {
    const Distribution peq = equilibrium_distribution(model, th);
    const auto m = static_cast<Eigen::Index>(model.num_states());
    return MarkovKernel(peq.probabilities().replicate(1, m));
}

Vector primary_rhs(const StateSpace& model, const ThetaPoint& th, const Distribution& p) {
    check_sizes(model.num_states(), p.size(), "primary_rhs");
    return equilibrium_distribution(model, th).probabilities() - p.probabilities();
}

Vector dual_rhs(const StateSpace& model, const EtaPoint& et, const Distribution& p) {
    check_sizes(model.num_states(), p.size(), "dual_rhs");
    return equilibrium_distribution(model, theta_of_eta(model, et)).probabilities() - p.probabilities();
}

Distribution exact_solution(const Distribution& p0, const Distribution& p_eq, double t) {
    if (!(t >= 0.0)) throw ValidationError("t: must be non-negative");
    check_sizes(p0.size(), p_eq.size(), "exact_solution");
    const double decay = std::exp(-t);
    return Distribution(decay * p0.probabilities() + (1.0 - decay) * p_eq.probabilities());
}

double expectation(const StateSpace& model, const Distribution& p, std::size_t a) {
    if (a >= model.num_observables()) {
        throw ValidationError("observable index " + std::to_string(a) + " out of range");
    }
    check_sizes(model.num_states(), p.size(), "expectation");
    return model.observables().row(static_cast<Eigen::Index>(a)).dot(p.probabilities());
}

Vector expectations(const StateSpace& model, const Distribution& p) {
    check_sizes(model.num_states(), p.size(), "expectations");
    return model.observables() * p.probabilities();
}

double psi_noneq(const StateSpace& model, const ThetaPoint& th, const Distribution& p) {
    check_sizes(model.num_states(), p.size(), "psi_noneq");
    const Distribution peq = equilibrium_distribution(model, th);
    const double ratio_sum = (p.probabilities().array() / peq.probabilities().array()).sum();
    return ratio_sum / static_cast<double>(model.num_states()) * psi_eq(model, th);
}

double cross_entropy(const Distribution& target, const Distribution& p) {
    check_sizes(target.size(), p.size(), "cross_entropy");
    if (!target.strictly_positive()) throw DomainError("cross_entropy: target distribution has a zero component");
    return p.probabilities().dot(target.probabilities().array().log().matrix());
}

double kl_divergence(const Distribution& p, const Distribution& q) {
    check_sizes(p.size(), q.size(), "kl_divergence");
    if (!q.strictly_positive()) throw DomainError("kl_divergence: reference distribution has a zero component");
    double sum = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] > 0.0) sum += p[j] * std::log(p[j] / q[j]);
    }
    return sum;
}

Trajectory integrate(const VectorField& rhs, const Distribution& p0, double t_max, double dt,
                     const Rk4Tableau& tableau) {
    Trajectory traj;
    traj.times = uniform_time_grid(t_max, dt);
    traj.states.reserve(traj.times.size());
    traj.states.push_back(p0);
    Vector p = p0.probabilities();
    for (std::size_t k = 1; k < traj.times.size(); ++k) {
        p = rk4_step(rhs, p, traj.times[k] - traj.times[k - 1], tableau);
        if (!p.allFinite()) throw NumericError("integrate: non-finite state at t=" + std::to_string(traj.times[k]));
        if (p.minCoeff() < -kIntegrationTolerance) {
            throw NumericError("integrate: negative probability " + std::to_string(p.minCoeff()) +
                               " at t=" + std::to_string(traj.times[k]));
        }
        if (std::abs(p.sum() - 1.0) > kIntegrationTolerance) {
            throw NumericError("integrate: total probability drifted to " + std::to_string(p.sum()) +
                               " at t=" + std::to_string(traj.times[k]));
        }
        traj.states.emplace_back(p, kIntegrationTolerance);
    }
    return traj;
}

void attach_diagnostics(Trajectory& traj, const StateSpace& model, const ThetaPoint& th) {
    const Distribution peq = equilibrium_distribution(model, th);
    traj.diagnostics.clear();
    traj.diagnostics.reserve(traj.states.size());
    for (const auto& p : traj.states) {
        TrajectoryDiagnostics d;
        d.expectations = expectations(model, p);
        d.psi_noneq = psi_noneq(model, th, p);
        d.cross_entropy = cross_entropy(peq, p);
        d.kl = kl_divergence(p, peq);
        traj.diagnostics.push_back(std::move(d));
    }
}

void write_trajectory_csv(std::ostream& os, const StateSpace& model, const Trajectory& traj) {
    if (traj.diagnostics.size() != traj.states.size()) {
        throw ValidationError("write_trajectory_csv: diagnostics not attached");
    }
    std::vector<std::string> header{"t"};
    for (const auto& l : model.labels()) header.push_back("p_" + l);
    for (std::size_t a = 0; a < model.num_observables(); ++a) header.push_back("obs_" + std::to_string(a + 1));
    header.insert(header.end(), {"psi_noneq", "cross_entropy", "kl"});
    csv::write_header(os, header);

    std::vector<double> row;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        row.clear();
        row.push_back(traj.times[k]);
        const auto& p = traj.states[k].probabilities();
        row.insert(row.end(), p.data(), p.data() + p.size());
        const auto& d = traj.diagnostics[k];
        row.insert(row.end(), d.expectations.data(), d.expectations.data() + d.expectations.size());
        row.insert(row.end(), {d.psi_noneq, d.cross_entropy, d.kl});
        csv::write_row(os, row);
    }
}

}  // namespace mastergeo
