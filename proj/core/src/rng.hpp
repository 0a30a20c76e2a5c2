// SPDX-License-Identifier: Apache-2.0
//
// Per-stream engines. Each (seed, domain, stream) triple gets its own
// mt19937_64, so draws never depend on scheduling or on other streams.

#pragma once

#include <cstdint>
#include <random>

namespace lcr::detail {

enum class RngDomain : std::uint32_t { scenario = 1, fading = 2, samples = 3 };

inline std::mt19937_64 make_engine(std::uint64_t seed, RngDomain domain,
                                   std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(domain),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

// Uniform in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace lcr::detail
