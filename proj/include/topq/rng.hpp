#pragma once
#include <cstdint>
#include <initializer_list>

namespace topq {

// Small, fast URBG used for every random stream in the library.
// 8 bytes of state makes per-arm substreams cheap; the output mix is the
// standard splitmix64 finalizer.
struct SplitMix64 {
    using result_type = std::uint64_t;

    std::uint64_t state = 0;

    SplitMix64() = default;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~std::uint64_t{0}; }

    result_type operator()() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double uniform01() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    // Uniform index in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        // Multiply-shift; bias is O(n / 2^64), irrelevant at our scales.
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>((*this)()) * n) >> 64);
    }

    // Bernoulli(p) trial. Exact for p in {0, 1}.
    bool bernoulli(double p) {
        if (p >= 1.0) return true;
        if (p <= 0.0) return false;
        return ((*this)() >> 11) < static_cast<std::uint64_t>(p * 0x1.0p53);
    }
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
}  // namespace detail

// Counter-based stream split: hashes a path of integers into a fresh seed.
// Equal (seed, path) always yields the same substream; distinct paths are
// decorrelated, which is what makes parallel trials reproducible.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = detail::mix64(seed ^ 0x6a09e667f3bcc909ull);
    for (std::uint64_t p : path) {
        h = detail::mix64(h ^ detail::mix64(p + 0x9e3779b97f4a7c15ull));
    }
    return h;
}

}  // namespace topq
