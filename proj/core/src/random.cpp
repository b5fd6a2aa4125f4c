#include "mastergeo/random.hpp"

#include <cmath>
#include <numbers>

namespace mastergeo {

double Rng::exponential() { return -std::log1p(-uniform()); }

double Rng::normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Distribution sample_simplex(Rng& rng, std::size_t size) {
    Vector e(static_cast<Eigen::Index>(size));
    for (Eigen::Index j = 0; j < e.size(); ++j) {
        // Zero has probability 2^-53; resample to keep the sample strictly positive.
        do {
            e(j) = rng.exponential();
        } while (!(e(j) > 0.0));
    }
    e /= e.sum();
    return Distribution(std::move(e));
}

}  // namespace mastergeo
