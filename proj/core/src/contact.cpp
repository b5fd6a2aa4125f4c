#include "mastergeo/contact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mastergeo/csv.hpp"
#include "mastergeo/error.hpp"
#include "mastergeo/legendre.hpp"

namespace mastergeo {

namespace {

void check_point(const ContactPoint& pt) {
    if (pt.y.size() != pt.x.size()) throw ValidationError("contact point: x and y dimensions differ");
    if (!pt.x.allFinite() || !pt.y.allFinite() || !std::isfinite(pt.z)) {
        throw ValidationError("contact point: coordinates must be finite");
    }
}

void check_tangent(const ContactPoint& pt, const ContactTangent& v) {
    if (v.dx.size() != pt.x.size() || v.dy.size() != pt.x.size()) {
        throw ValidationError("contact tangent: dimension mismatch with base point");
    }
}

void check_potential(const Potential& w, const ContactPoint& pt) {
    check_point(pt);
    if (pt.dim() != w.dim()) throw ValidationError("contact point: dimension mismatch with potential");
}

// ϖ and ∇ϖ at the (static) base point of a relaxation flow.
struct Anchor {
    double value;
    Vector gradient;
};

Anchor anchor_at(const Potential& w, const Vector& x) { return {w.value(x), w.gradient(x)}; }

ContactPoint flow_from(const Anchor& a, const ContactPoint& pt0, double t) {
    if (t == 0.0) return pt0;
    const double decay = std::exp(-t);
    return {pt0.x, a.gradient + (pt0.y - a.gradient) * decay, a.value + (pt0.z - a.value) * decay};
}

ContactTangent field_from(const Anchor& a, const ContactPoint& pt) {
    return {Vector::Zero(pt.x.size()), a.gradient - pt.y, a.value - pt.z};
}

double permutation_sign(const std::vector<int>& perm) {
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        for (std::size_t j = i + 1; j < perm.size(); ++j) {
            if (perm[i] > perm[j]) ++inversions;
        }
    }
    return inversions % 2 == 0 ? 1.0 : -1.0;
}

}  // namespace

Potential::Potential(std::size_t dim, Function value, Gradient gradient)
    : dim_(dim), value_(std::move(value)), gradient_(std::move(gradient)) {
    if (dim_ < 1) throw ValidationError("potential: dimension must be positive");
    if (!value_ || !gradient_) throw ValidationError("potential: value and gradient are required");
}

Potential Potential::with_numeric_gradient(std::size_t dim, Function value, double step) {
    auto gradient = [value, step](const Vector& x) {
        Vector g(x.size());
        for (Eigen::Index a = 0; a < x.size(); ++a) {
            Vector plus = x, minus = x;
            plus(a) += step;
            minus(a) -= step;
            g(a) = (value(plus) - value(minus)) / (2.0 * step);
        }
        return g;
    };
    Potential p(dim, std::move(value), std::move(gradient));
    p.analytic_ = false;
    return p;
}

double Potential::value(const Vector& x) const {
    if (static_cast<std::size_t>(x.size()) != dim_) throw ValidationError("potential: dimension mismatch");
    return value_(x);
}

Vector Potential::gradient(const Vector& x) const {
    if (static_cast<std::size_t>(x.size()) != dim_) throw ValidationError("potential: dimension mismatch");
    return gradient_(x);
}

Potential psi_potential(const StateSpace& model) {
    return Potential(
        model.num_observables(), [model](const Vector& x) { return psi_eq(model, ThetaPoint(x)); },
        [model](const Vector& x) { return eta_of_theta(model, ThetaPoint(x)).value(); });
}

Potential phi_potential(const StateSpace& model) {
    return Potential(
        model.num_observables(), [model](const Vector& x) { return phi_eq(model, EtaPoint(model, x)); },
        [model](const Vector& x) { return grad_phi(model, EtaPoint(model, x)); });
}

ContactHamiltonian::ContactHamiltonian(Function value, Partials partials)
    : value_(std::move(value)), partials_(std::move(partials)) {
    if (!value_ || !partials_) throw ValidationError("contact Hamiltonian: value and partials are required");
}

ContactHamiltonian ContactHamiltonian::with_numeric_partials(Function value, double step) {
    auto partials = [value, step](const ContactPoint& pt) {
        const auto central = [&](ContactPoint plus, ContactPoint minus) {
            return (value(plus) - value(minus)) / (2.0 * step);
        };
        ContactTangent d{Vector(pt.x.size()), Vector(pt.y.size()), 0.0};
        for (Eigen::Index a = 0; a < pt.x.size(); ++a) {
            ContactPoint plus = pt, minus = pt;
            plus.x(a) += step;
            minus.x(a) -= step;
            d.dx(a) = central(plus, minus);
            plus = pt;
            minus = pt;
            plus.y(a) += step;
            minus.y(a) -= step;
            d.dy(a) = central(plus, minus);
        }
        ContactPoint plus = pt, minus = pt;
        plus.z += step;
        minus.z -= step;
        d.dz = central(plus, minus);
        return d;
    };
    return ContactHamiltonian(std::move(value), std::move(partials));
}

ContactHamiltonian relaxation_hamiltonian(const Potential& w) {
    return ContactHamiltonian([w](const ContactPoint& pt) { return w.value(pt.x) - pt.z; },
                              [w](const ContactPoint& pt) {
                                  return ContactTangent{w.gradient(pt.x), Vector::Zero(pt.y.size()), -1.0};
                              });
}

double contact_form_eval(const ContactPoint& pt, const ContactTangent& v) {
    check_point(pt);
    check_tangent(pt, v);
    return v.dz - pt.y.dot(v.dx);
}

ContactTangent general_contact_field(const ContactHamiltonian& h, const ContactPoint& pt) {
    check_point(pt);
    const ContactTangent d = h.partials(pt);
    check_tangent(pt, d);
    return {-d.dy, d.dx + pt.y * d.dz, h.value(pt) - pt.y.dot(d.dy)};
}

ContactTangent relaxation_field(const Potential& w, const ContactPoint& pt) {
    check_potential(w, pt);
    return field_from(anchor_at(w, pt.x), pt);
}

ContactPoint flow_exact(const Potential& w, const ContactPoint& pt0, double t) {
    check_potential(w, pt0);
    if (!(t >= 0.0)) throw ValidationError("t: must be non-negative");
    return flow_from(anchor_at(w, pt0.x), pt0, t);
}

double hamiltonian_value(const Potential& w, const ContactPoint& pt) {
    check_potential(w, pt);
    return w.value(pt.x) - pt.z;
}

ContactPoint legendre_submanifold_point(const Potential& w, const Vector& x) {
    return {x, w.gradient(x), w.value(x)};
}

double metric_g_eval(const ContactPoint& pt, const ContactTangent& u, const ContactTangent& v) {
    check_point(pt);
    check_tangent(pt, u);
    check_tangent(pt, v);
    return 0.5 * (u.dx.dot(v.dy) + u.dy.dot(v.dx)) + contact_form_eval(pt, u) * contact_form_eval(pt, v);
}

double curve_length(const Potential& w, const ContactPoint& pt0, double t, const LengthOptions& opts) {
    check_potential(w, pt0);
    if (!(t >= 0.0)) throw ValidationError("t: must be non-negative");
    if (!(opts.horizon > 0.0)) throw ValidationError("horizon: must be positive");

    const Anchor anchor = anchor_at(w, pt0.x);
    const auto speed = [&](double s) {
        const ContactPoint pt = flow_from(anchor, pt0, s);
        const ContactTangent v = field_from(anchor, pt);
        const double g = metric_g_eval(pt, v, v);
        if (g < -opts.negative_tolerance) {
            throw NumericError("curve not length-measurable under G: G(v, v) = " + std::to_string(g) +
                               " at t=" + std::to_string(s));
        }
        return std::sqrt(std::max(g, 0.0));
    };
    const double end = t + opts.horizon;
    const double body = simpson(speed, t, end, opts.panels);
    // Beyond the horizon the speed is exactly |h(end)| e^{-(s - end)}.
    const double tail = std::abs(anchor.value - flow_from(anchor, pt0, end).z);
    return body + tail;
}

double contact_volume_coefficient(const ContactPoint& pt, double step) {
    check_point(pt);
    const Eigen::Index n = pt.x.size();
    const Eigen::Index dims = 2 * n + 1;

    // λ components in (x, y, z) order as a function of the coordinates.
    const auto lambda = [n, dims](const Vector& q) {
        Vector l = Vector::Zero(dims);
        l.head(n) = -q.segment(n, n);
        l(dims - 1) = 1.0;
        return l;
    };
    Vector q(dims);
    q << pt.x, pt.y, pt.z;

    Matrix jac(dims, dims);  // jac(i, j) = ∂_i λ_j
    for (Eigen::Index i = 0; i < dims; ++i) {
        Vector plus = q, minus = q;
        plus(i) += step;
        minus(i) -= step;
        jac.row(i) = ((lambda(plus) - lambda(minus)) / (2.0 * step)).transpose();
    }
    const Matrix dlambda = jac - jac.transpose();
    const Vector l = lambda(q);

    std::vector<int> perm(static_cast<std::size_t>(dims));
    std::iota(perm.begin(), perm.end(), 0);
    double sum = 0.0;
    do {
        double term = l(perm[0]);
        for (Eigen::Index i = 0; i < n && term != 0.0; ++i) {
            term *= dlambda(perm[static_cast<std::size_t>(2 * i + 1)], perm[static_cast<std::size_t>(2 * i + 2)]);
        }
        if (term != 0.0) sum += permutation_sign(perm) * term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum / std::pow(2.0, static_cast<double>(n));
}

ContactTrajectory integrate_relaxation(const Potential& w, const ContactPoint& pt0, double t_max, double dt,
                                       const Rk4Tableau& tableau) {
    check_potential(w, pt0);
    const Eigen::Index n = pt0.x.size();
    // x is static under the flow, so ϖ and ∇ϖ are evaluated once.
    const Anchor anchor = anchor_at(w, pt0.x);
    const VectorField field = [&anchor, n](const Vector& q) {
        Vector dq(2 * n + 1);
        dq.head(n).setZero();
        dq.segment(n, n) = anchor.gradient - q.segment(n, n);
        dq(2 * n) = anchor.value - q(2 * n);
        return dq;
    };
    Vector q0(2 * n + 1);
    q0 << pt0.x, pt0.y, pt0.z;

    ContactTrajectory traj;
    traj.times = uniform_time_grid(t_max, dt);
    const auto qs = integrate_rk4(field, q0, traj.times, tableau);
    traj.states.reserve(qs.size());
    for (const auto& q : qs) traj.states.push_back({q.head(n), q.segment(n, n), q(2 * n)});
    return traj;
}

void write_contact_csv(std::ostream& os, const Potential& w, const ContactTrajectory& traj,
                       const LengthOptions& opts) {
    const std::size_t n = w.dim();
    std::vector<std::string> header{"t"};
    for (std::size_t a = 1; a <= n; ++a) header.push_back("x_" + std::to_string(a));
    for (std::size_t a = 1; a <= n; ++a) header.push_back("y_" + std::to_string(a));
    header.insert(header.end(), {"z", "h", "length"});
    csv::write_header(os, header);
    std::vector<double> row;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto& pt = traj.states[k];
        row.assign(1, traj.times[k]);
        row.insert(row.end(), pt.x.data(), pt.x.data() + n);
        row.insert(row.end(), pt.y.data(), pt.y.data() + n);
        row.insert(row.end(), {pt.z, hamiltonian_value(w, pt), curve_length(w, pt, 0.0, opts)});
        csv::write_row(os, row);
    }
}

}  // namespace mastergeo
