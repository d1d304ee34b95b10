#pragma once

#include <cmath>
#include <cstdint>

namespace stfm {

// Counter-based Gaussian substreams. Each draw is a pure function of
// (master_seed, path, substep, mode, family), so any trajectory replays
// exactly from its seed tuple and coupled dt-refinements can share a
// Brownian path by block-summing fine increments.
namespace rng {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
    return mix64(h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

// uniform in (0, 1]
inline double to_unit(std::uint64_t v) {
    return (static_cast<double>(v >> 11) + 1.0) * 0x1.0p-53;
}

// One standard normal per key (Box-Muller, cosine branch only).
inline double standard_normal(std::uint64_t key) {
    const double u1 = to_unit(mix64(key));
    const double u2 = to_unit(mix64(key ^ 0xda3e39cb94b95bdbull));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace rng

// Seed tuple owned by one trajectory. Paths with distinct indices draw from
// independent substreams of the same master seed.
struct RngLease {
    std::uint64_t master_seed = 0;
    std::uint64_t path_index = 0;
};

enum class NoiseFamily : std::uint64_t { transport = 0, ito = 1 };

// N(0,1) draw for one (path, substep, mode, family) cell.
inline double wiener_draw(const RngLease& lease, std::uint64_t substep, int mode,
                          NoiseFamily family) {
    std::uint64_t h = rng::mix64(lease.master_seed);
    h = rng::combine(h, lease.path_index);
    h = rng::combine(h, substep);
    h = rng::combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(mode)));
    h = rng::combine(h, static_cast<std::uint64_t>(family));
    return rng::standard_normal(h);
}

} // namespace stfm
