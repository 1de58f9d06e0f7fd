#pragma once
#include <array>
#include <cstdint>
#include <string_view>

namespace epc {

/// Reproducible RNG pinned for the random-coupling baseline: xoshiro256**
/// seeded through splitmix64. Identical streams on every platform.
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& si : state_) si = splitmix64_next(x);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, bound); plain modulo draw (bias < 2^-57 for bound <= 128).
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static std::uint64_t splitmix64_next(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

/// FNV-1a 64-bit hash, used to derive per-pair seeds from pair ids.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Per-pair seed for the random coupling: mixes the pair id hash with the
/// global seed through the splitmix64 finalizer. Documented and stable.
inline std::uint64_t pair_seed(std::string_view pair_id, std::uint64_t global_seed) {
    std::uint64_t g = global_seed;
    const std::uint64_t mixed_global = Xoshiro256ss::splitmix64_next(g);
    std::uint64_t s = fnv1a64(pair_id) ^ mixed_global;
    return Xoshiro256ss::splitmix64_next(s);
}

} // namespace epc
