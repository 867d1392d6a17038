#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace lifeins::numerics {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Stateless: the output is a pure function of (key, counter), so any draw
/// can be regenerated from its coordinates without shared state.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit constexpr Philox4x32(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}
    constexpr Philox4x32(Key key) noexcept : key_(key) {}

    constexpr Counter operator()(Counter ctr) const noexcept {
        Key k = key_;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                k[0] += kW0;
                k[1] += kW1;
            }
            ctr = single_round(ctr, k);
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static constexpr Counter single_round(const Counter& c, const Key& k) noexcept {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }

    Key key_;
};

/// Maps two 32-bit words to a double strictly inside (0, 1) with 52 random bits.
constexpr double to_open_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

/// Two uniforms in (0, 1) from one Philox block.
inline std::pair<double, double> uniform_pair(const Philox4x32::Counter& block) noexcept {
    return {to_open_unit(block[0], block[1]), to_open_unit(block[2], block[3])};
}

/// Two independent standard normals from one Philox block (Box-Muller).
inline std::pair<double, double> normal_pair(const Philox4x32::Counter& block) noexcept {
    const auto [u1, u2] = uniform_pair(block);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace lifeins::numerics
