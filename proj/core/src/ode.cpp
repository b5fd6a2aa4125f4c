#include "mastergeo/ode.hpp"

#include <cmath>
#include <limits>

#include "mastergeo/error.hpp"

namespace mastergeo {

std::vector<double> uniform_time_grid(double t_max, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt: must be positive and finite");
    if (!(t_max >= dt) || !std::isfinite(t_max)) throw ValidationError("t_max: must be finite and at least dt");
    const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
    std::vector<double> times(steps + 1);
    for (std::size_t k = 0; k < steps; ++k) times[k] = static_cast<double>(k) * dt;
    times[steps] = t_max;
    return times;
}

Vector rk4_step(const VectorField& f, const Vector& y, double h, const Rk4Tableau& tableau) {
    const Vector k1 = f(y);
    const Vector k2 = f(y + (tableau.stage[0] * h) * k1);
    const Vector k3 = f(y + (tableau.stage[1] * h) * k2);
    const Vector k4 = f(y + (tableau.stage[2] * h) * k3);
    const auto& w = tableau.weight;
    return y + h * (w[0] * k1 + w[1] * k2 + w[2] * k3 + w[3] * k4);
}

std::vector<Vector> integrate_rk4(const VectorField& f, const Vector& y0,
                                  const std::vector<double>& times, const Rk4Tableau& tableau) {
    if (times.empty()) throw ValidationError("times: empty grid");
    std::vector<Vector> states;
    states.reserve(times.size());
    states.push_back(y0);
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double h = times[k] - times[k - 1];
        if (!(h > 0.0)) throw ValidationError("times: grid must be strictly increasing");
        states.push_back(rk4_step(f, states.back(), h, tableau));
        if (!states.back().allFinite()) throw NumericError("integration produced a non-finite state");
    }
    return states;
}

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels < 1) throw ValidationError("simpson: panels must be positive");
    const int intervals = 2 * panels;
    const double h = (b - a) / intervals;
    double sum = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
    return sum * h / 3.0;
}

double fitted_log_rate(const std::vector<double>& times, const std::vector<double>& values, double floor) {
    double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < times.size() && i < values.size(); ++i) {
        if (!(values[i] > floor)) continue;
        const double l = std::log(values[i]);
        st += times[i];
        sl += l;
        stt += times[i] * times[i];
        stl += times[i] * l;
        ++count;
    }
    if (count < 2) return std::numeric_limits<double>::quiet_NaN();
    const double m = static_cast<double>(count);
    const double denom = m * stt - st * st;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (m * stl - st * sl) / denom;
}

}  // namespace mastergeo
