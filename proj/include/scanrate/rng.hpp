#pragma once

#include <cstdint>
#include <cmath>
#include <string_view>

namespace scanrate {

namespace detail {

// splitmix64 finalizer; also used as the seed-derivation mix.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

/// FNV-1a 64-bit hash, used to turn cell identifiers into stream ids.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Deterministic random stream (xoshiro256++), seeded via splitmix64.
///
/// Sub-stream derivation is fixed by contract so that any run can be
/// reproduced: derive(master, id, index) seeds from the three 64-bit words
/// fed through splitmix64 in order (master, then id, then index), each
/// output xor-folded into the next input. Streams with distinct
/// (master, id, index) triples are independent for all practical purposes.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : state_) w = detail::splitmix64(sm);
    }

    static RandomStream derive(std::uint64_t master, std::uint64_t stream_id,
                               std::uint64_t index) {
        std::uint64_t sm = master;
        std::uint64_t a = detail::splitmix64(sm);
        sm = a ^ stream_id;
        std::uint64_t b = detail::splitmix64(sm);
        sm = b ^ index;
        return RandomStream(detail::splitmix64(sm));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1): 53-bit mantissa, offset by half an ulp
    /// so neither endpoint can occur. One u64 per draw.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Fair coin. One u64 per draw.
    bool next_bool() { return (next_u64() >> 63) != 0; }

    /// Uniform integer in [0, bound) by rejection. At least one u64 per draw.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
        std::uint64_t x;
        do { x = next_u64(); } while (x >= limit);
        return x % bound;
    }

    /// Standard normal via Box-Muller, cosine branch. Exactly two u64 per draw.
    double next_gaussian() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Exponential(1). One u64 per draw.
    double next_exponential() { return -std::log(next_unit()); }

private:
    std::uint64_t state_[4];
};

} // namespace scanrate
