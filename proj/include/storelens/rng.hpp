// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace storelens {

/// splitmix64 finalizer; used to derive independent substream seeds from a
/// master seed plus arbitrary tags, stable across platforms.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed) { return splitmix64(seed); }

template <typename... Tags>
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag, Tags... rest) {
    return mix_seed(splitmix64(seed ^ (tag + 0x9e3779b97f4a7c15ULL)), static_cast<std::uint64_t>(rest)...);
}

/// Engine for a derived substream. Separate streams per (probe, component,
/// epoch, ...) keep traces reproducible and insensitive to unrelated draws.
template <typename... Tags>
std::mt19937_64 substream(std::uint64_t seed, Tags... tags) {
    return std::mt19937_64(mix_seed(seed, static_cast<std::uint64_t>(tags)...));
}

/// Beta(a, b) draw via two gamma variates.
inline double draw_beta(std::mt19937_64& rng, double a, double b) {
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    double x = ga(rng);
    double y = gb(rng);
    double s = x + y;
    if (s <= 0.0) return 0.5;
    return x / s;
}

}  // namespace storelens
