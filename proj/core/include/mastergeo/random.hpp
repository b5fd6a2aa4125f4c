#pragma once

#include <cstdint>
#include <random>

#include "mastergeo/exp_family.hpp"

namespace mastergeo {

/// Seeded generator whose output is identical across standard libraries:
/// std::mt19937_64 is fully specified, and the conversions below avoid the
/// implementation-defined std::*_distribution classes.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard exponential via inversion.
    double exponential();
    /// Standard normal via Box–Muller.
    double normal();

private:
    std::mt19937_64 engine_;
};

/// Uniform sample from the open probability simplex (normalized exponential
/// spacings).
Distribution sample_simplex(Rng& rng, std::size_t size);

}  // namespace mastergeo
