#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace haggle {

/// Mixing function used to derive stream seeds from a master seed plus a key
/// path. One splitmix64 step per input word gives well-spread, reproducible
/// sub-seeds on any platform.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// PCG32 generator (Melissa O'Neill's pcg32_random_r). Small state, solid
/// statistical quality, and fully deterministic across platforms, which the
/// experiment harness relies on for byte-identical reruns.
class Pcg32 {
public:
    Pcg32() : Pcg32(0x853c49e6748fea9bULL, 0xda3e39cb94b95bdbULL) {}

    Pcg32(std::uint64_t seed, std::uint64_t stream) {
        state_ = 0u;
        inc_ = (stream << 1u) | 1u;
        nextU32();
        state_ += seed;
        nextU32();
    }

    std::uint32_t nextU32() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
    }

    /// Unbiased integer in [0, bound) via Lemire-style rejection.
    std::uint32_t nextBelow(std::uint32_t bound) {
        std::uint32_t threshold = (-bound) % bound;
        for (;;) {
            std::uint32_t r = nextU32();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform01() {
        std::uint64_t a = nextU32() >> 5;   // 27 bits
        std::uint64_t b = nextU32() >> 6;   // 26 bits
        return static_cast<double>((a << 26) + b) * (1.0 / 9007199254740992.0);
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; the spare deviate is cached.
    double normal() {
        if (haveSpare_) {
            haveSpare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        haveSpare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
    double spare_ = 0.0;
    bool haveSpare_ = false;
};

/// Derives an independent generator for a key path under a master seed, e.g.
/// makeStream(master, {kCustomerStream, dist, customer}). Identical paths give
/// identical streams; distinct paths give statistically independent ones.
inline Pcg32 makeStream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = master ^ 0x6a09e667f3bcc908ULL;
    std::uint64_t seed = splitmix64(s);
    std::uint64_t stream = 0;
    for (std::uint64_t p : path) {
        s ^= p + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
        seed ^= splitmix64(s);
        stream = splitmix64(s);
    }
    return Pcg32(seed, stream);
}

}  // namespace haggle
