#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "scanrate/rng.hpp"

namespace scanrate {

/// Direction of one deconstruction step: which end of the block is removed
/// when going from size k+1 down to size k. Reversed, a Left shrink becomes
/// a prepend-on-the-left expansion.
enum class Shrink : std::uint8_t { Right = 0, Left = 1 };

struct BlockWindow {
    int start = 1;  // 1-based index of the first element
    int size = 1;

    friend bool operator==(const BlockWindow&, const BlockWindow&) = default;

    bool contains(const BlockWindow& inner) const {
        return inner.start >= start && inner.start + inner.size <= start + size;
    }
};

/// A nested family of blocks, one per size 1..n, encoded by the shrink
/// sequence that deconstructs the full block down to a single element.
/// Every one of the 2^(n-1) shrink sequences is a valid scan and vice versa.
class ScanPath {
public:
    ScanPath(int n, std::vector<Shrink> shrinks)
        : n_(n), shrinks_(std::move(shrinks)) {
        if (n < 1) throw std::invalid_argument("ScanPath: length must be >= 1");
        if (static_cast<int>(shrinks_.size()) != n - 1)
            throw std::invalid_argument("ScanPath: need exactly n-1 shrink steps");
    }

    int n() const { return n_; }
    const std::vector<Shrink>& shrinks() const { return shrinks_; }

    /// Start index of the singleton block: 1 plus the number of Left removals.
    int start_index() const {
        int lefts = 0;
        for (Shrink s : shrinks_) lefts += (s == Shrink::Left);
        return 1 + lefts;
    }

    /// The block of size k, reached by applying the first k-1 expansion moves
    /// (the shrink sequence read backwards) from the singleton start.
    BlockWindow block_of_size(int k) const {
        if (k < 1 || k > n_)
            throw std::domain_error("block_of_size: k out of [1, n]");
        int start = start_index();
        // expansion u is shrinks[n-2-u]; a Left expansion moves the start down
        for (int u = 0; u < k - 1; ++u)
            if (shrinks_[n_ - 2 - u] == Shrink::Left) --start;
        return {start, k};
    }

    /// Compact debug form "j:LRR..." (singleton start, then expansion directions).
    std::string to_string() const {
        std::string out = std::to_string(start_index());
        out += ':';
        for (int u = n_ - 2; u >= 0; --u)
            out += (shrinks_[u] == Shrink::Left) ? 'L' : 'R';
        return out;
    }

    friend bool operator==(const ScanPath&, const ScanPath&) = default;

private:
    int n_;
    std::vector<Shrink> shrinks_;
};

/// The scan whose size-k block is always the first k observations.
inline ScanPath direct_scan(int n) {
    if (n < 1) throw std::invalid_argument("direct_scan: length must be >= 1");
    return ScanPath(n, std::vector<Shrink>(static_cast<std::size_t>(n - 1), Shrink::Right));
}

/// The scan whose size-k block is always the last k observations.
inline ScanPath reverse_scan(int n) {
    if (n < 1) throw std::invalid_argument("reverse_scan: length must be >= 1");
    return ScanPath(n, std::vector<Shrink>(static_cast<std::size_t>(n - 1), Shrink::Left));
}

/// Draws one scan uniformly from the 2^(n-1) possibilities: n-1 independent
/// fair direction draws. Consumes exactly n-1 stream values.
inline ScanPath uniform_random_scan(int n, RandomStream& stream) {
    if (n < 1) throw std::invalid_argument("uniform_random_scan: length must be >= 1");
    std::vector<Shrink> shrinks(static_cast<std::size_t>(n - 1));
    for (auto& s : shrinks) s = stream.next_bool() ? Shrink::Left : Shrink::Right;
    return ScanPath(n, std::move(shrinks));
}

/// All 2^(n-1) scans, in bitmask order (bit t set = Left at shrink step t).
inline std::vector<ScanPath> enumerate_scans(int n, int cap = 20) {
    if (n < 1) throw std::invalid_argument("enumerate_scans: length must be >= 1");
    if (n > cap) throw std::length_error("enumerate_scans: n exceeds enumeration cap");
    const std::uint64_t total = std::uint64_t{1} << (n - 1);
    std::vector<ScanPath> out;
    out.reserve(total);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        std::vector<Shrink> shrinks(static_cast<std::size_t>(n - 1));
        for (int t = 0; t < n - 1; ++t)
            shrinks[static_cast<std::size_t>(t)] =
                ((mask >> t) & 1) ? Shrink::Left : Shrink::Right;
        out.emplace_back(n, std::move(shrinks));
    }
    return out;
}

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > (~std::uint64_t{0}) / a)
        throw std::overflow_error("scan count exceeds 64 bits");
    return a * b;
}

inline std::uint64_t binomial_u64(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        // result * (n-k+i) is divisible by i at every step
        std::uint64_t num = checked_mul(result, static_cast<std::uint64_t>(n - k + i));
        result = num / static_cast<std::uint64_t>(i);
    }
    return result;
}

} // namespace detail

/// Number of scans whose block of size `window.size` is exactly `window`:
/// C(n-k, i-1) * 2^(k-1).
inline std::uint64_t count_scans_containing(int n, const BlockWindow& window) {
    const int i = window.start, k = window.size;
    if (k < 1 || i < 1 || i + k - 1 > n)
        throw std::domain_error("count_scans_containing: window outside series");
    const std::uint64_t choose = detail::binomial_u64(n - k, i - 1);
    if (k - 1 >= 64) throw std::overflow_error("scan count exceeds 64 bits");
    return detail::checked_mul(choose, std::uint64_t{1} << (k - 1));
}

} // namespace scanrate
