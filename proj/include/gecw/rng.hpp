#pragma once

// Counter-based deterministic random generator (SplitMix64 over a keyed
// counter). Output depends only on (seed, stream, draw index), so parallel
// per-sentence substreams are reproducible bit-for-bit on every platform.
// Constants are the standard SplitMix64 values (Steele, Lea & Flood 2014).

#include <cstdint>

namespace gecw {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace detail

class CounterRng {
public:
    // `stream` selects an independent substream (sentence index in synth).
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(detail::splitmix64(detail::splitmix64(seed) ^
                                  (0x9E3779B97F4A7C15ULL * (stream + 1)))) {}

    std::uint64_t next_u64() { return detail::splitmix64(key_ + 0xBF58476D1CE4E5B9ULL * ++counter_); }

    // Uniform in [0, 1); 53-bit mantissa.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return next_double() < p;
    }

    // Uniform in [0, n). Modulo bias is negligible for the table sizes used
    // here and keeps the draw count independent of n.
    std::uint64_t next_below(std::uint64_t n) { return n ? next_u64() % n : 0; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace gecw
