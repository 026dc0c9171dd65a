#include "mcorr/rng.hpp"

#include <cmath>
#include <numbers>

namespace mcorr {
namespace {

// splitmix64 finalizer (Steele/Lea/Flood mixing constants).
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kSeedSalt = 0x8BADF00D5EEDC0DEULL;
constexpr std::uint64_t kChildSalt = 0xC8D1F05A11CEB00BULL;

}  // namespace

RngStream::RngStream(std::uint64_t seed) noexcept
    : key_(mix64((seed + kGamma) ^ kSeedSalt)), state_(key_) {}

RngStream RngStream::child(std::uint64_t index) const noexcept {
    const std::uint64_t child_key = mix64(key_ ^ mix64(index + kChildSalt));
    return RngStream(child_key, child_key);
}

std::uint64_t RngStream::next_u64() noexcept {
    state_ += kGamma;
    return mix64(state_);
}

double RngStream::next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) noexcept {
    // Lemire-style rejection: accept draws below the largest multiple of bound.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    std::uint64_t draw = next_u64();
    while (draw > limit) draw = next_u64();
    return draw % bound;
}

double RngStream::next_gaussian() noexcept {
    if (has_cached_gaussian_) {
        has_cached_gaussian_ = false;
        return cached_gaussian_;
    }
    // u1 on (0,1] so the log is finite; u2 on [0,1).
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_gaussian_ = radius * std::sin(angle);
    has_cached_gaussian_ = true;
    return radius * std::cos(angle);
}

}  // namespace mcorr
