#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace indicmt {

// Deterministic random source. mt19937_64 output is fully specified by the
// standard; the derived draws below are hand-rolled (std::*_distribution is
// implementation-defined) so streams replay identically everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n); modulo bias is immaterial at 64 bits.
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

    // Box-Muller; one fresh pair of uniforms per call.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // Fisher-Yates (std::shuffle is implementation-defined).
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i)
            std::swap(items[i - 1], items[below(i)]);
    }

    // Stable sub-stream derivation for (pair, epoch)-scoped shuffles.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        std::uint64_t h = 0xcbf29ce484222325ull ^ seed;
        for (std::uint64_t x : {a, b}) {
            for (int i = 0; i < 8; ++i) {
                h ^= (x >> (8 * i)) & 0xff;
                h *= 0x100000001b3ull;
            }
        }
        return h;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace indicmt
