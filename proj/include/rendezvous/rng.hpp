// Deterministic Gaussian RNG for Monte Carlo episodes.
//
// mt19937_64 output is fully specified by the standard; the Gaussian
// transform (Box-Muller) is our own, so a given seed produces the same
// noise stream on every platform.

#ifndef RENDEZVOUS_RNG_HPP
#define RENDEZVOUS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace rendezvous {

class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in (0, 1), 53-bit resolution, never exactly 0.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the paired draw is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    // Sample from N(mean, variance). variance == 0 yields mean exactly.
    double normal(double mean, double variance) {
        return mean + std::sqrt(variance) * normal();
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// splitmix64 finalizer, used to derive independent episode seeds from a
// master seed: episode_seed(i) = mix(master + GOLDEN * (i + 1)).
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t episode_seed(std::uint64_t master_seed, std::uint64_t run_index) {
    return mix_seed(master_seed + 0x9E3779B97F4A7C15ull * (run_index + 1));
}

} // namespace rendezvous

#endif
