#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace emgus {

/// splitmix64 finalizer; used to derive independent stream seeds from one master seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
    return mix_seed(mix_seed(master) ^ mix_seed(stream + 0x5851F42D4C957F2DULL));
}

// Stream tags for derive_seed.
inline constexpr std::uint64_t kStreamEmgBurst = 1;
inline constexpr std::uint64_t kStreamEmgBaseline = 2;
inline constexpr std::uint64_t kStreamUsFrame = 0x100;

/// Standard normal variates, bit-reproducible across standard library implementations
/// (std::normal_distribution is not).
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // Box-Muller on (0, 1] uniforms built from the top 53 bits.
        const double u1 = uniform_open_closed();
        const double u2 = uniform_open_closed();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    double uniform_open_closed() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace emgus
