#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace nilkex {

/// Seeded deterministic random stream. The raw output of std::mt19937_64 is
/// fully specified by the standard, and bounded draws go through rejection
/// sampling here, so equal seeds give equal streams on every toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform draw from [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: empty range");
        const std::uint64_t threshold = (-n) % n; // 2^64 mod n
        std::uint64_t x;
        do {
            x = next();
        } while (x < threshold);
        return x % n;
    }

    /// Uniform draw from [1, n).
    std::uint64_t nonzero_below(std::uint64_t n) {
        if (n < 2) throw std::invalid_argument("Rng::nonzero_below: empty range");
        return 1 + below(n - 1);
    }

    bool coin() { return (next() & 1) != 0; }

    /// Derives an independent child seed (splitmix64 finalizer); used to split
    /// one master seed into per-purpose streams.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace nilkex
