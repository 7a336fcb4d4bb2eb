#pragma once

// Counter-based random streams. Every consumer derives an independent stream
// from (master seed, stream index), so realizations can be computed in any
// order or on any number of threads and still produce identical draws.

#include <cmath>
#include <cstdint>

#include "nodalab/geometry.hpp"

namespace nodalab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0x5851f42d4c957f2dull)) {}

    // Independent stream for sub-task `index` of a master seed.
    static Rng stream(std::uint64_t master_seed, std::uint64_t index) {
        std::uint64_t mixed = splitmix64(master_seed) ^ splitmix64(index * 0x9e3779b97f4a7c15ull + 1);
        return Rng(mixed);
    }

    std::uint64_t next_u64() {
        state_ = splitmix64(state_);
        return state_;
    }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1], safe as a log() argument.
    double uniform01_open0() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller; one value per call, no rejection.
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u = uniform01_open0();
        double v = uniform01();
        double r = std::sqrt(-2.0 * std::log(u));
        cached_ = r * std::sin(2.0 * M_PI * v);
        have_cached_ = true;
        return r * std::cos(2.0 * M_PI * v);
    }

    // Uniform point in the open disc B(radius, center), by rejection.
    Vec2 uniform_in_disc(Vec2 center, double radius) {
        while (true) {
            double x = uniform(-radius, radius);
            double y = uniform(-radius, radius);
            if (x * x + y * y < radius * radius) return {center.x + x, center.y + y};
        }
    }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace nodalab
