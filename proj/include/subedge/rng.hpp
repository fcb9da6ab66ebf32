#pragma once

#include <cstdint>
#include <string_view>

namespace subedge {

// Seedable 64-bit generator (splitmix64 core). Bounded draws are unbiased
// via rejection on the modulus, so uniformity claims in tests hold exactly.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 1) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, bound). Rejection keeps the draw unbiased.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0ULL - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform in [0,1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool next_bit() { return (next_u64() & 1ULL) != 0; }

private:
    std::uint64_t state_;
};

// Derives an independent stream seed from (seed, label), so one user-facing
// seed can drive the oracle, estimator, preprocessing and sampling streams
// separately. FNV-1a over the label, then a splitmix finalize.
inline std::uint64_t substream_seed(std::uint64_t seed, std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    std::uint64_t z = seed ^ (h + 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace subedge
