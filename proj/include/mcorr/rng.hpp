#pragma once

#include <cstdint>

namespace mcorr {

// Counter-style pseudorandom stream built on the splitmix64 finalizer.
//
// Two properties the standard <random> facilities do not guarantee and this
// class does:
//   * bit-identical output for the same seed on every platform/compiler
//     (std::normal_distribution is implementation-defined), and
//   * O(1) derivation of statistically independent child streams by index,
//     so trial t / resample b can be seeded without touching a shared state.
//
// State advances only through the next_* calls; child() is const and leaves
// the parent sequence untouched.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) noexcept;

    // Independent stream keyed by (this stream's identity, index).
    // Distinct indices give distinct keys with overwhelming probability.
    [[nodiscard]] RngStream child(std::uint64_t index) const noexcept;

    std::uint64_t next_u64() noexcept;

    // Uniform on [0, 1), 53-bit resolution.
    double next_double() noexcept;

    // Uniform integer on [0, bound); bound must be nonzero.
    // Uses rejection sampling, so there is no modulo bias.
    std::uint64_t next_below(std::uint64_t bound) noexcept;

    // Standard normal via Box-Muller (pairs are generated, the second is
    // cached). Deterministic given the call sequence.
    double next_gaussian() noexcept;

    // Stream identity; equal keys means equal future output.
    [[nodiscard]] std::uint64_t key() const noexcept { return key_; }

  private:
    RngStream(std::uint64_t key, std::uint64_t state) noexcept : key_(key), state_(state) {}

    std::uint64_t key_;
    std::uint64_t state_;
    double cached_gaussian_ = 0.0;
    bool has_cached_gaussian_ = false;
};

}  // namespace mcorr
