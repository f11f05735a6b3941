#include "airmax/airlink.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "airmax/error.hpp"
#include "airmax/wide.hpp"

namespace airmax {


SignalRanges::SignalRanges(double s_min, double s_max, double p_min, double p_max)
    : s_min_(s_min), s_max_(s_max), p_min_(p_min), p_max_(p_max) {
    if (!std::isfinite(s_min) || !std::isfinite(s_max) || !std::isfinite(p_min) ||
        !std::isfinite(p_max))
        throw InvalidArgument("signal ranges must be finite");
    if (!(s_min < s_max)) throw InvalidArgument("signal ranges: need s_min < s_max");
    if (!(p_min >= 0.0 && p_min < p_max))
        throw InvalidArgument("signal ranges: need 0 <= p_min < p_max");
}

double scale(const SignalRanges& ranges, double x) {
    if (!ranges.contains(x))
        throw InvalidArgument("scale: state " + std::to_string(x) + " outside [" +
                              std::to_string(ranges.s_min()) + ", " +
                              std::to_string(ranges.s_max()) + "]");
    return ranges.alpha() * x + ranges.beta();
}

double pilot(const SignalRanges& ranges) { return ranges.alpha() + ranges.beta(); }

Wide descale(const SignalRanges& ranges, Wide r, Wide r_pilot) {
    const Wide alpha = ranges.alpha();
    const Wide beta = ranges.beta();
    return (r - beta / (alpha + beta) * r_pilot) / alpha;
}

double receive_round(const SignalRanges& ranges, std::span<const Signal> states,
                     const CoefficientDraw& draw) {
    if (states.empty()) throw InvalidArgument("receive_round: no transmitters");
    if (states.size() != draw.values.size())
        throw InvalidArgument("receive_round: state and coefficient sets differ in size");

    const Wide alpha = ranges.alpha();
    const Wide beta = ranges.beta();
    const Wide pilot_level = alpha + beta;

    WideSum data;
    WideSum gains;
    for (const Signal& s : states) {
        if (!ranges.contains(s.value))
            throw InvalidArgument("receive_round: state of transmitter " +
                                  std::to_string(s.transmitter) + " outside S");
        auto it = std::lower_bound(
            draw.values.begin(), draw.values.end(), s.transmitter,
            [](const Coefficient& c, AgentId id) { return c.transmitter < id; });
        if (it == draw.values.end() || it->transmitter != s.transmitter)
            throw InvalidArgument("receive_round: no coefficient for transmitter " +
                                  std::to_string(s.transmitter));
        const Wide gain = it->gain;
        data.add(gain * (alpha * s.value + beta));
        gains.add(gain);
    }
    const Wide r = data.value();
    const Wide r_pilot = pilot_level * gains.value();
    return static_cast<double>(pilot_level * descale(ranges, r, r_pilot) / r_pilot);
}

void to_json(nlohmann::json& j, const SignalRanges& ranges) {
    j = {{"s", {ranges.s_min(), ranges.s_max()}}, {"p", {ranges.p_min(), ranges.p_max()}}};
}

SignalRanges ranges_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("ranges", "expected an object");
    auto interval = [&](const char* key) {
        const std::string field = std::string("ranges.") + key;
        if (!j.contains(key)) throw ConfigError(field, "missing");
        const auto& v = j[key];
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw ConfigError(field, "expected [min, max]");
        return std::pair{v[0].get<double>(), v[1].get<double>()};
    };
    const auto [s_min, s_max] = interval("s");
    const auto [p_min, p_max] = interval("p");
    try {
        return SignalRanges(s_min, s_max, p_min, p_max);
    } catch (const InvalidArgument& e) {
        throw ConfigError("ranges", e.what());
    }
}

}  // namespace airmax
