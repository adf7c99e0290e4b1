#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace gridwar {

// All randomness in the artifact flows from one user seed. Independent
// streams are derived per (seed, purpose label, index) so that work items
// (e.g. simulation draws) can run in any order or thread count and still
// produce identical results.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view purpose, std::uint64_t index) {
        std::uint64_t state = seed;
        state ^= splitmix64(state) ^ fnv1a64(purpose);
        state ^= splitmix64(state) ^ index;
        // Warm a 312-word seed would be overkill; four words decorrelate
        // streams with adjacent indices well enough for mt19937_64.
        std::seed_seq seq{splitmix64(state), splitmix64(state), splitmix64(state),
                          splitmix64(state)};
        engine_.seed(seq);
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log() argument.
    double uniform_pos() { return 1.0 - uniform(); }

    // Standard normal via Box-Muller. Distribution objects from <random>
    // are not bit-stable across standard libraries, so this is hand-rolled.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // N(mean, sd) conditioned on being >= 0, by rejection.
    double truncated_normal_nonneg(double mean, double sd) {
        for (;;) {
            double draw = normal(mean, sd);
            if (draw >= 0.0) return draw;
        }
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection to kill modulo bias; n is tiny in practice.
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        for (;;) {
            std::uint64_t v = engine_();
            if (v < limit) return v % n;
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Round half away from zero on a nonnegative value.
inline double round_half_away(double x) { return std::floor(x + 0.5); }

}  // namespace gridwar
