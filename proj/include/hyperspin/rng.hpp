#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hyperspin {

// One step of the splitmix64 generator; advances the state in place.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Seedable, reproducible generator: a std::mt19937_64 core with portable
// output mapping (doubles are built from raw bits, never through
// std::uniform_real_distribution, so the byte stream is implementation
// independent).
//
// Splitting rule: stream k of base seed s is seeded with
//     splitmix64(s + (k+1) * 0x9E3779B97F4A7C15),
// i.e. one splitmix64 step taken from state s + (k+1)*gamma. Replica k of a
// run uses stream k; derived components (cells of an experiment) split again
// from their own stream seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static std::uint64_t stream_seed(std::uint64_t base, std::uint64_t k) {
        std::uint64_t state = base + k * 0x9E3779B97F4A7C15ull;
        return splitmix64_next(state);
    }

    static Rng stream(std::uint64_t base, std::uint64_t k) {
        return Rng(stream_seed(base, k));
    }

    std::uint64_t bits() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(bits() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform integer in [0, n). Multiply-shift; bias is O(n / 2^64).
    std::uint32_t below(std::uint32_t n) {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(bits()) * n) >> 64);
    }

    bool coin(double p) { return uniform() < p; }

    // Standard normal via Box-Muller (fixed two-draw consumption).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace hyperspin
