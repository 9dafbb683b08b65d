#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace twistlab::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic random stream for a (seed, lane) pair. Lanes are mutually
// independent and do not depend on evaluation order, which is what lets
// estimator trials run in parallel and still reproduce bit for bit. All
// floating draws are built from raw bits, not from std:: distributions,
// whose output is implementation defined.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t lane) {
        state_ = seed ^ (0xD1B54A32D192ED03ull * (lane + 1));
        // decorrelate nearby (seed, lane) pairs
        splitmix64(state_);
        splitmix64(state_);
    }

    std::uint64_t bits() { return splitmix64(state_); }

    // uniform on (0, 1]
    double uniform01() { return static_cast<double>((bits() >> 11) + 1) * 0x1.0p-53; }

    // uniform on [lo, hi]
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double gaussian() {
        const double u = uniform01();
        const double v = uniform01();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(bits() % n); }

    int sign() { return (bits() & 1u) ? 1 : -1; }

private:
    std::uint64_t state_;
};

inline Stream trial_stream(std::uint64_t seed, std::uint64_t trial) { return Stream(seed, trial); }

}  // namespace twistlab::rng
