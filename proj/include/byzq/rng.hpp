#pragma once

#include <cstdint>

#include "byzq/gaussian.hpp"

namespace byzq {

/// Counter-based generator: every draw is a stateless hash of
/// (seed, stream, counter) through two SplitMix64 finalizer rounds. Streams
/// never share state, so any assignment of streams to threads reproduces the
/// serial sequence bit for bit.
class CounterRng {
 public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
        std::uint64_t x = mix(seed_ + 0x9e3779b97f4a7c15ULL * (stream + 1));
        return mix(x + 0x9e3779b97f4a7c15ULL * (counter + 1));
    }

    /// Uniform on the open interval (0, 1).
    double uniform(std::uint64_t stream, std::uint64_t counter) const {
        return (static_cast<double>(bits(stream, counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via the inverse CDF (one draw consumed).
    double normal(std::uint64_t stream, std::uint64_t counter) const {
        return normal_quantile(uniform(stream, counter));
    }

    /// Uniform integer in [0, n).
    std::uint32_t below(std::uint64_t stream, std::uint64_t counter, std::uint32_t n) const {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(bits(stream, counter)) * n) >> 64);
    }

 private:
    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return x;
    }

    std::uint64_t seed_;
};

/// Cursor over one stream: advances a local counter per draw.
struct RngStream {
    const CounterRng* rng;
    std::uint64_t stream;
    std::uint64_t counter = 0;

    double uniform() { return rng->uniform(stream, counter++); }
    double normal() { return rng->normal(stream, counter++); }
    std::uint32_t below(std::uint32_t n) { return rng->below(stream, counter++, n); }
};

}  // namespace byzq
