#pragma once

// Seeded random source with portable draws.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are not (their algorithms are
// implementation-defined), so the draws below are written out explicitly:
//
//   uniform01()      (x >> 11) * 2^-53                       -> [0, 1)
//   uniform_int(a,b) rejection sampling on x mod (b-a+1)    -> [a, b]
//   normal()         Box-Muller on two uniform01() draws
//
// Any implementation that follows these rules reproduces the same scenarios
// and optimizer runs from the same seed.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace superframe {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer on the closed range [lo, hi]. Requires lo <= hi.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1u;
        if (span == 0) return static_cast<std::int64_t>(engine_());  // full 64-bit range
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return lo + static_cast<std::int64_t>(x % span);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace superframe
