#pragma once

// Counter-based random streams. A stream is a 64-bit key; the k-th draw is a
// pure function of (key, k), so any path or sample can be regenerated
// independently of how work was scheduled across threads.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace setr::rng {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Key of child stream `index` under `parent`. Distinct salts keep the
/// derivation tree from colliding with the draw sequence itself.
constexpr std::uint64_t derive(std::uint64_t parent, std::uint64_t index) noexcept {
    return mix64(mix64(parent ^ 0x632be59bd9b4e019ULL) + mix64(index + 0x8cb92ba72f3d8dd7ULL));
}

class CounterStream {
public:
    constexpr explicit CounterStream(std::uint64_t key) noexcept : key_(key) {}

    constexpr std::uint64_t key() const noexcept { return key_; }

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
        return mix64(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform on the open interval (0, 1); never returns 0 or 1.
    constexpr double uniform(std::uint64_t counter) const noexcept {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Pair of independent standard normals (Box-Muller) from draws 2j, 2j+1.
    void normal_pair(std::uint64_t j, double& z0, double& z1) const noexcept {
        const double r = std::sqrt(-2.0 * std::log(uniform(2 * j)));
        const double theta = 2.0 * std::numbers::pi * uniform(2 * j + 1);
        z0 = r * std::cos(theta);
        z1 = r * std::sin(theta);
    }

private:
    std::uint64_t key_;
};

}  // namespace setr::rng
