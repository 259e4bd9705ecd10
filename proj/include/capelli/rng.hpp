#pragma once

#include <cstdint>

#include "capelli/rational.hpp"

namespace capelli {

// splitmix64: tiny, seedable, stable across platforms.  Randomized checks
// must reproduce bit-for-bit from a seed, so no std:: distributions here.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi] via rejection-free modulo (bias negligible for the
    // tiny ranges used here, and determinism is what matters).
    long range(long lo, long hi) {
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    // Small nonzero rational with numerator in [-9,9]\{0}, denominator in [1,4].
    Rat small_rat() {
        long num = range(-9, 9);
        if (num == 0) num = 1;
        return Rat(num, range(1, 4));
    }

    Rat small_rat_or_zero() {
        long num = range(-9, 9);
        return Rat(num, range(1, 4));
    }
};

}  // namespace capelli
