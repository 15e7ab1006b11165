// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <cstdint>
#include <random>

namespace mmw {

using Rng = std::mt19937_64;

// Independent sub-streams derived from one user seed. Each consumer of
// randomness draws from its own stream so that, e.g., changing the number
// of blockage events does not perturb the measurement noise.
enum class Stream : std::uint32_t {
    paths = 1,
    motion = 2,
    blockage = 3,
    measurement = 4,
    capture = 5,
    taps = 6,
};

inline Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

}  // namespace mmw
