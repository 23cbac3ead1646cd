#pragma once

#include <cstdint>
#include <random>

namespace ttpqd {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t size) {
    return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

/// Uniform draw from [0, 1).
inline double uniform_real(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace ttpqd
