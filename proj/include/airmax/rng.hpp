#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace airmax {

// Counter-based random streams.
//
// A Stream is a 64-bit key plus a position. The value at position c is a pure
// function of (key, c), so any draw can be reproduced without replaying the
// draws before it. split() derives an independent child key from a tag; the
// simulator keys its streams by (scenario seed, purpose, iteration, receiver,
// transmitter) so results never depend on evaluation order or thread count.
class Stream {
public:
    using result_type = std::uint64_t;

    constexpr explicit Stream(std::uint64_t key = 0) noexcept : key_(key) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return at(counter_++); }

    /// Value at an absolute position, independent of the current position.
    result_type at(std::uint64_t position) const noexcept;

    Stream split(std::uint64_t tag) const noexcept;
    Stream split(std::string_view tag) const noexcept;

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t position() const noexcept { return counter_; }

    /// Uniform on the open interval (0, 1); never returns 0 or 1.
    double uniform_open();
    /// Uniform on [0, 1).
    double uniform();
    /// Unbiased integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);
    /// Standard normal via Box-Muller.
    double normal();
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace airmax
