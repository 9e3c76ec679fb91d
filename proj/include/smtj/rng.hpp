#pragma once

// Seeded random streams for reproducible, embarrassingly parallel trials.
// One root seed; trial streams are derived by mixing the trial index into
// the seed with splitmix64, so trial k always sees the same sequence
// regardless of how many trials run or in what order.

#include <cstdint>
#include <cmath>
#include <random>

namespace smtj {

// splitmix64 finalizer (Steele, Lea, Flood 2014). Stable across platforms.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    // Stream for trial `index` under a common root seed. Documented
    // derivation: splitmix64(root ^ splitmix64(index + 1)).
    static RandomStream for_trial(std::uint64_t root_seed, std::uint64_t index) {
        return RandomStream(root_seed ^ splitmix64(index + 1));
    }

    // Uniform on (0, 1]; zero is excluded so -log(u) is always finite.
    double uniform01() {
        return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    }

    // Exponential variate with rate lambda via inverse transform.
    double exponential(double lambda) {
        return -std::log(uniform01()) / lambda;
    }

    // Standard normal (polar Box-Muller, cached second value).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    // Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        // modulo bias is < 2^-40 for any n that fits a spin count or bin count
        return gen_() % n;
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace smtj
