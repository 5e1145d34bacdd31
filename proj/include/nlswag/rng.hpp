// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_RNG_HPP
#define NLSWAG_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

#include "nlswag/grid.hpp"

namespace nlswag {

// Philox4x32-10 counter-based generator (Salmon et al. constants).
// A draw is a pure function of (key, counter); pixels can therefore be
// generated in any order, in parallel, with reproducible results.
struct Philox4x32 {
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::uint64_t key,
                                              std::uint32_t c0, std::uint32_t c1,
                                              std::uint32_t c2, std::uint32_t c3) {
        std::uint32_t k0 = static_cast<std::uint32_t>(key);
        std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = std::uint64_t(kM0) * c0;
            std::uint64_t p1 = std::uint64_t(kM1) * c2;
            std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            std::uint32_t n0 = hi1 ^ c1 ^ k0;
            std::uint32_t n1 = lo1;
            std::uint32_t n2 = hi0 ^ c3 ^ k1;
            std::uint32_t n3 = lo0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += kW0;
            k1 += kW1;
        }
        return {c0, c1, c2, c3};
    }
};

// Uniform double in [0, 1) from 53 random bits.
inline double u01(std::uint32_t hi, std::uint32_t lo) {
    std::uint64_t bits = (std::uint64_t(hi) << 32) | lo;
    return double(bits >> 11) * 0x1.0p-53;
}

// Four standard normals for a (row, col) site, stream `stream`, trial `trial`.
// Box-Muller on Philox uniforms; u is shifted away from 0 for the log.
inline std::array<double, 4> site_normals(std::uint64_t seed, std::uint32_t row, std::uint32_t col,
                                          std::uint32_t stream, std::uint32_t trial) {
    std::array<double, 4> z;
    for (int half = 0; half < 2; ++half) {
        auto r = Philox4x32::block(seed, row, col, 2 * stream + std::uint32_t(half), trial);
        double a = 1.0 - u01(r[0], r[1]);  // (0, 1]
        double b = u01(r[2], r[3]);        // [0, 1)
        double mag = std::sqrt(-2.0 * std::log(a));
        z[2 * half] = mag * std::cos(kTwoPi * b);
        z[2 * half + 1] = mag * std::sin(kTwoPi * b);
    }
    return z;
}

// Uniform in [-1, 1) for a (row, col) site at a given level tag.
inline double site_uniform_pm1(std::uint64_t seed, std::uint32_t row, std::uint32_t col,
                               std::uint32_t tag) {
    auto r = Philox4x32::block(seed, row, col, tag, 0x6d700000u);
    return 2.0 * u01(r[0], r[1]) - 1.0;
}

}  // namespace nlswag

#endif
