#pragma once

#include <cstdint>
#include <random>
#include <utility>

namespace bohm {

/// SplitMix64 finaliser; used to turn (seed, stream, index) into
/// well-separated engine seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Purposes for which independent streams are derived from one master seed.
enum class Stream : std::uint64_t {
    InitialPositions = 1,
    SettingsA = 2,
    SettingsB = 3,
    Replicate = 4,
};

constexpr std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index) noexcept {
    return mix64(mix64(master ^ mix64(static_cast<std::uint64_t>(stream))) + index);
}

/// mt19937_64 with hand-rolled uniform and Gaussian transforms. The standard
/// engines are specified bit-for-bit but the standard distributions are not,
/// so draws here are reproducible on every conforming platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t master, Stream stream, std::uint64_t index)
        : engine_(derive_seed(master, stream, index)) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) noexcept { return engine_() % n; }

    /// Two independent standard normal draws (Box-Muller).
    std::pair<double, double> normal_pair();

private:
    std::mt19937_64 engine_;
};

} // namespace bohm
