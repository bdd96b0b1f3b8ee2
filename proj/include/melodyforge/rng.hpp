#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace melodyforge {

/// xoshiro256** (Blackman & Vigna, 2018) with its 256-bit state expanded from
/// a 64-bit seed by SplitMix64. Every derived draw (bounded integers, unit
/// reals, shuffles) is defined here rather than via <random> distributions,
/// whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    /// Seeds from (seed, stream) so that independent streams can share a seed.
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next();

    /// Uniform integer in [0, bound). Bias-free by rejection. bound must be > 0.
    std::uint64_t below(std::uint64_t bound);
    /// Uniform real in [0, 1) with 53 random bits.
    double unit();
    /// Uniform real in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    /// Fair coin, returns 0 or 1.
    int coin() { return static_cast<int>(below(2)); }

    /// Fisher-Yates, drawing j from [0, i] for i = n-1 down to 1.
    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace melodyforge
