#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace herd {

// Identifies one realization of a stochastic experiment.  The pair
// (master_seed, realization_index) maps deterministically onto an
// independent random stream, so sweeps over realizations are
// reproducible and collision-free.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint32_t realization_index = 0;
};

namespace detail {
// SplitMix64 step, used to decorrelate seed material before it reaches
// the engine.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
} // namespace detail

// Random stream with a fixed, documented draw algorithm.
//
// Engine: std::mt19937_64 (bit-exact across platforms by the standard),
// seeded with splitmix64(master_seed ^ splitmix64(index)).  Uniforms are
// built from the top 53 bits of the engine output; normals use the
// Box-Muller transform.  std::*_distribution is avoided on purpose: its
// output is implementation-defined and would break golden tests.
class Rng {
public:
    explicit Rng(SeedSpec seed)
        : engine_(detail::splitmix64(seed.master_seed ^
                                     detail::splitmix64(seed.realization_index))) {}

    explicit Rng(std::uint64_t raw_seed) : engine_(raw_seed) {}

    // Uniform on [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform01_open_left() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the second variate of each pair is
    // cached so draws come in a fixed order.
    double gauss() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01_open_left();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * M_PI * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    // Exponential waiting time with the given rate.
    double exponential(double rate) {
        return -std::log(uniform01_open_left()) / rate;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace herd
