#include "airmax/rng.hpp"

#include <cmath>
#include <numbers>

namespace airmax {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

Stream::result_type Stream::at(std::uint64_t position) const noexcept {
    return mix64(key_ + (position + 1) * kGolden);
}

Stream Stream::split(std::uint64_t tag) const noexcept {
    return Stream(mix64(key_ ^ mix64(tag + 0x632be59bd9b4e019ULL)) + kGolden);
}

Stream Stream::split(std::string_view tag) const noexcept {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return split(h);
}

double Stream::uniform_open() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t Stream::below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t v;
    do {
        v = (*this)();
    } while (v >= limit);
    return v % bound;
}

double Stream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_normal_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

}  // namespace airmax
