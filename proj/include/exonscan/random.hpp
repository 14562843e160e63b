#pragma once

// Portable deterministic random numbers. Every consumer (corpus generation,
// SVM shuffling) draws through this generator so results are identical on
// every platform and standard library; std:: distributions are not used
// because their output is implementation-defined.
//
// Generator: xoshiro256** (Blackman & Vigna), state s[0..3] seeded from a
// single 64-bit value with splitmix64.
//
//   splitmix64:  x += 0x9E3779B97F4A7C15
//                z = x
//                z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//                z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//                return z ^ (z >> 31)
//
//   xoshiro256**: result = rotl(s1 * 5, 7) * 9
//                 t = s1 << 17
//                 s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3
//                 s2 ^= t;  s3 = rotl(s3, 45)

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace exonscan {

inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& w : s_) {
            w = splitmix64(sm);
        }
    }

    /// Independent substream for item `index` of a run seeded with `seed`.
    static Xoshiro256 substream(std::uint64_t seed, std::uint64_t index) noexcept {
        std::uint64_t sm = seed ^ ((index + 1) * 0xD1B54A32D192ED03ULL);
        return Xoshiro256(splitmix64(sm));
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = std::rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), unbiased by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) {
            throw std::invalid_argument("below(0)");
        }
        const std::uint64_t threshold = (0 - n) % n;
        while (true) {
            const std::uint64_t r = next();
            if (r >= threshold) {
                return r % n;
            }
        }
    }

    /// Uniform integer in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

    /// Index drawn from a discrete distribution given by cumulative weights
    /// (last entry is the total).
    std::size_t categorical(const std::vector<double>& cumulative) {
        const double u = uniform01() * cumulative.back();
        for (std::size_t i = 0; i < cumulative.size(); ++i) {
            if (u < cumulative[i]) {
                return i;
            }
        }
        return cumulative.size() - 1;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::array<std::uint64_t, 4> s_{};
};

} // namespace exonscan
