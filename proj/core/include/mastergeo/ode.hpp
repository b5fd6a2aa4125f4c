#pragma once

#include <array>
#include <functional>
#include <vector>

#include "mastergeo/types.hpp"

namespace mastergeo {

/// Autonomous vector field dy/dt = f(y).
using VectorField = std::function<Vector(const Vector&)>;

/// Explicit four-stage Runge–Kutta coefficients (diagonal Butcher tableau).
/// Defaults to the classical scheme; other values exist so verification can
/// be run against a deliberately broken integrator.
struct Rk4Tableau {
    std::array<double, 3> stage{0.5, 0.5, 1.0};
    std::array<double, 4> weight{1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};

    static Rk4Tableau classical() { return {}; }
};

/// Uniform grid 0, dt, 2dt, ... ending exactly at t_max (the last step is
/// shortened if t_max is not a multiple of dt). Requires 0 < dt ≤ t_max.
std::vector<double> uniform_time_grid(double t_max, double dt);

Vector rk4_step(const VectorField& f, const Vector& y, double h,
                const Rk4Tableau& tableau = Rk4Tableau::classical());

/// Integrates over `times` (strictly increasing, times[0] is the start).
/// Returns one state per time, the first being y0.
std::vector<Vector> integrate_rk4(const VectorField& f, const Vector& y0,
                                  const std::vector<double>& times,
                                  const Rk4Tableau& tableau = Rk4Tableau::classical());

/// Composite Simpson rule with `panels` parabolic panels (2·panels
/// subintervals) on [a, b].
double simpson(const std::function<double(double)>& f, double a, double b, int panels);

/// Least-squares slope of ln(values) against times, over entries whose value
/// exceeds `floor`. Returns NaN when fewer than two entries qualify.
double fitted_log_rate(const std::vector<double>& times, const std::vector<double>& values,
                       double floor = 0.0);

}  // namespace mastergeo
