#pragma once

#include <span>

#include <nlohmann/json_fwd.hpp>

#include "airmax/channel.hpp"
#include "airmax/wide.hpp"

namespace airmax {

/// State interval S = [s_min, s_max] and transmit-power interval
/// P = [p_min, p_max] of the analog link. Phi(x) = alpha x + beta maps S
/// onto P.
class SignalRanges {
public:
    /// Throws InvalidArgument unless s_min < s_max and 0 <= p_min < p_max.
    SignalRanges(double s_min, double s_max, double p_min, double p_max);

    /// S = [0, 10], P = [1, 5].
    static SignalRanges defaults() { return {0.0, 10.0, 1.0, 5.0}; }

    double s_min() const noexcept { return s_min_; }
    double s_max() const noexcept { return s_max_; }
    double p_min() const noexcept { return p_min_; }
    double p_max() const noexcept { return p_max_; }
    double alpha() const noexcept { return (p_max_ - p_min_) / (s_max_ - s_min_); }
    double beta() const noexcept { return p_min_ - alpha() * s_min_; }
    bool contains(double x) const noexcept { return x >= s_min_ && x <= s_max_; }

    friend bool operator==(const SignalRanges&, const SignalRanges&) = default;

private:
    double s_min_, s_max_, p_min_, p_max_;
};

/// Phi(x). Throws InvalidArgument when x is outside S.
double scale(const SignalRanges& ranges, double x);

/// The pilot level Phi(1) = alpha + beta, common to all transmitters.
double pilot(const SignalRanges& ranges);

/// Psi(r, r') = (r - beta/(alpha+beta) r') / alpha.
Wide descale(const SignalRanges& ranges, Wide r, Wide r_pilot);

/// One synchronized round at a receiver: every transmitter sends Phi(x_j)
/// plus the pilot over the same gains; the receiver de-scales and divides by
/// the pilot sum. Returns sum_j h_ij x_j, a convex combination of the
/// transmitted states.
///
/// Sums run in binary128, so a single transmitter (or several equal states)
/// comes back bit-identical unless the state sits within about 1e-16 of S_min.
double receive_round(const SignalRanges& ranges, std::span<const Signal> states,
                     const CoefficientDraw& draw);

void to_json(nlohmann::json& j, const SignalRanges& ranges);
SignalRanges ranges_from_json(const nlohmann::json& j);

}  // namespace airmax
