#pragma once

#include <functional>
#include <ostream>
#include <vector>

#include "mastergeo/exp_family.hpp"
#include "mastergeo/ode.hpp"

namespace mastergeo {

/// Darboux coordinates (x, y, z) with contact form λ = dz − y_a dx^a.
struct ContactPoint {
    Vector x;
    Vector y;
    double z = 0.0;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(x.size()); }
};

struct ContactTangent {
    Vector dx;
    Vector dy;
    double dz = 0.0;
};

/// A function ϖ(x) of the base coordinates with its gradient.
class Potential {
public:
    using Function = std::function<double(const Vector&)>;
    using Gradient = std::function<Vector(const Vector&)>;

    Potential(std::size_t dim, Function value, Gradient gradient);

    /// Gradient by central differences with the given step.
    static Potential with_numeric_gradient(std::size_t dim, Function value, double step = 1e-6);

    std::size_t dim() const noexcept { return dim_; }
    double value(const Vector& x) const;
    Vector gradient(const Vector& x) const;
    bool analytic_gradient() const noexcept { return analytic_; }

private:
    std::size_t dim_;
    Function value_;
    Gradient gradient_;
    bool analytic_ = true;
};

/// ϖ = Ψ^eq on θ coordinates, with ∇ϖ = η(θ).
Potential psi_potential(const StateSpace& model);
/// ϖ = Φ^eq on η coordinates, with ∇ϖ = θ(η). Points outside the moment
/// polytope interior raise ValidationError.
Potential phi_potential(const StateSpace& model);

/// A contact Hamiltonian h(x, y, z) with its partial derivatives.
class ContactHamiltonian {
public:
    using Function = std::function<double(const ContactPoint&)>;
    using Partials = std::function<ContactTangent(const ContactPoint&)>;

    ContactHamiltonian(Function value, Partials partials);

    /// Partials by central differences, step 1e-6 unless given.
    static ContactHamiltonian with_numeric_partials(Function value, double step = 1e-6);

    double value(const ContactPoint& pt) const { return value_(pt); }
    /// (∂h/∂x, ∂h/∂y, ∂h/∂z) packed into a tangent.
    ContactTangent partials(const ContactPoint& pt) const { return partials_(pt); }

private:
    Function value_;
    Partials partials_;
};

/// h = ϖ(x) − z with analytic partials (∇ϖ, 0, −1).
ContactHamiltonian relaxation_hamiltonian(const Potential& w);

/// λ(v) = v.dz − y · v.dx at `pt`.
double contact_form_eval(const ContactPoint& pt, const ContactTangent& v);

/// ẋ = −∂h/∂y, ẏ = ∂h/∂x + y ∂h/∂z, ż = h − y · ∂h/∂y.
ContactTangent general_contact_field(const ContactHamiltonian& h, const ContactPoint& pt);

/// Field of h = ϖ − z: ẋ = 0, ẏ = ∇ϖ(x) − y, ż = ϖ(x) − z.
ContactTangent relaxation_field(const Potential& w, const ContactPoint& pt);

/// Exact flow of relaxation_field for time t ≥ 0.
ContactPoint flow_exact(const Potential& w, const ContactPoint& pt0, double t);

/// h = ϖ(x) − z.
double hamiltonian_value(const Potential& w, const ContactPoint& pt);

/// (x, ∇ϖ(x), ϖ(x)) on the Legendre submanifold generated by ϖ.
ContactPoint legendre_submanifold_point(const Potential& w, const Vector& x);

/// G(u, v) = ½ Σ_a (u.dx_a v.dy_a + u.dy_a v.dx_a) + λ(u) λ(v).
double metric_g_eval(const ContactPoint& pt, const ContactTangent& u, const ContactTangent& v);

struct LengthOptions {
    /// Simpson panels (each spans two subintervals).
    int panels = 1000;
    /// Quadrature covers [t, t + horizon]; the tail beyond is added exactly.
    double horizon = 40.0;
    /// Most negative G(γ̇, γ̇) accepted as zero.
    double negative_tolerance = 1e-12;
};

/// Length under G of the relaxation flow from pt0, measured from time t to
/// the equilibrium at t → ∞. Throws NumericError if G(γ̇, γ̇) is negative
/// beyond tolerance anywhere on the sampled curve.
double curve_length(const Potential& w, const ContactPoint& pt0, double t, const LengthOptions& opts = {});

/// Coefficient of λ ∧ (dλ)^n against dx¹∧…∧dxⁿ∧dy₁∧…∧dyₙ∧dz, obtained by
/// evaluating the form on the coordinate basis with dλ from central
/// differences of λ's components. Nonzero everywhere on a contact manifold.
double contact_volume_coefficient(const ContactPoint& pt, double step = 1e-6);

struct ContactTrajectory {
    std::vector<double> times;
    std::vector<ContactPoint> states;
};

/// RK4 integration of relaxation_field on uniform_time_grid(t_max, dt).
ContactTrajectory integrate_relaxation(const Potential& w, const ContactPoint& pt0, double t_max, double dt,
                                       const Rk4Tableau& tableau = Rk4Tableau::classical());

/// Header `t,x_<a>...,y_<a>...,z,h,length`; length is curve_length from each
/// stored point.
void write_contact_csv(std::ostream& os, const Potential& w, const ContactTrajectory& traj,
                       const LengthOptions& opts = {});

}  // namespace mastergeo
