#include "airmax/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "airmax/error.hpp"

namespace airmax {

ChannelModel ChannelModel::constant(double value) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw InvalidArgument("constant channel gain must be positive and finite");
    return ChannelModel(Kind::constant, value, 0.0);
}

ChannelModel ChannelModel::rayleigh(double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw InvalidArgument("rayleigh scale must be positive and finite");
    return ChannelModel(Kind::rayleigh, scale, 0.0);
}

ChannelModel ChannelModel::rician(double k_factor, double scale) {
    if (!(k_factor >= 0.0) || !std::isfinite(k_factor))
        throw InvalidArgument("rician k_factor must be non-negative and finite");
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw InvalidArgument("rician scale must be positive and finite");
    return ChannelModel(Kind::rician, scale, k_factor);
}

double ChannelModel::sample(Stream& rng) const {
    switch (kind_) {
        case Kind::constant:
            return scale_;
        case Kind::rayleigh:
            // inverse CDF; uniform_open() keeps the log finite and the result > 0
            return scale_ * std::sqrt(-2.0 * std::log(rng.uniform_open()));
        case Kind::rician: {
            double magnitude = 0.0;
            while (!(magnitude > 0.0)) magnitude = std::abs(sample_complex(rng));
            return magnitude;
        }
    }
    return scale_;
}

std::complex<double> ChannelModel::sample_complex(Stream& rng) const {
    if (kind_ == Kind::constant) return {scale_, 0.0};
    const double re = scale_ * rng.normal();
    const double im = scale_ * rng.normal();
    return complex_mean() + std::complex<double>(re, im);
}

std::complex<double> ChannelModel::complex_mean() const noexcept {
    switch (kind_) {
        case Kind::constant:
            return {scale_, 0.0};
        case Kind::rayleigh:
            return {0.0, 0.0};
        case Kind::rician:
            return {scale_ * std::sqrt(2.0 * k_factor_), 0.0};
    }
    return {};
}

double ChannelModel::complex_variance() const noexcept {
    return kind_ == Kind::constant ? 0.0 : 2.0 * scale_ * scale_;
}

CoefficientDraw draw_coefficients(const ChannelModel& model, AgentId receiver,
                                  std::span<const AgentId> transmitters, const Stream& rng) {
    if (transmitters.empty()) throw InvalidArgument("draw_coefficients: empty transmitter set");
    CoefficientDraw draw{receiver, {}};
    draw.values.reserve(transmitters.size());
    for (AgentId j : transmitters) {
        Stream link = rng.split(j);
        draw.values.push_back({j, model.sample(link)});
    }
    std::sort(draw.values.begin(), draw.values.end(),
              [](const Coefficient& a, const Coefficient& b) { return a.transmitter < b.transmitter; });
    for (std::size_t i = 1; i < draw.values.size(); ++i)
        if (draw.values[i].transmitter == draw.values[i - 1].transmitter)
            throw InvalidArgument("draw_coefficients: duplicate transmitter " +
                                  std::to_string(draw.values[i].transmitter));
    return draw;
}

std::vector<Coefficient> normalize(const CoefficientDraw& draw) {
    long double total = 0.0L;
    for (const Coefficient& c : draw.values) total += c.gain;
    std::vector<Coefficient> h;
    h.reserve(draw.values.size());
    for (const Coefficient& c : draw.values)
        h.push_back({c.transmitter, static_cast<double>(c.gain / total)});
    return h;
}

double wmac_superpose(std::span<const Signal> signals, const CoefficientDraw& draw) {
    if (signals.size() != draw.values.size())
        throw InvalidArgument("wmac_superpose: signal and coefficient sets differ in size");
    long double sum = 0.0L;
    for (const Signal& s : signals) {
        auto it = std::lower_bound(
            draw.values.begin(), draw.values.end(), s.transmitter,
            [](const Coefficient& c, AgentId id) { return c.transmitter < id; });
        if (it == draw.values.end() || it->transmitter != s.transmitter)
            throw InvalidArgument("wmac_superpose: no coefficient for transmitter " +
                                  std::to_string(s.transmitter));
        sum += static_cast<long double>(it->gain) * s.value;
    }
    return static_cast<double>(sum);
}

void to_json(nlohmann::json& j, const ChannelModel& model) {
    switch (model.kind()) {
        case ChannelModel::Kind::constant:
            j = {{"kind", "constant"}, {"value", model.scale()}};
            break;
        case ChannelModel::Kind::rayleigh:
            j = {{"kind", "rayleigh"}, {"scale", model.scale()}};
            break;
        case ChannelModel::Kind::rician:
            j = {{"kind", "rician"}, {"k_factor", model.k_factor()}, {"scale", model.scale()}};
            break;
    }
}

namespace {
double number_field(const nlohmann::json& j, const char* key, const std::string& prefix,
                    double fallback, bool required) {
    if (!j.contains(key)) {
        if (required) throw ConfigError(prefix + "." + key, "missing");
        return fallback;
    }
    if (!j[key].is_number()) throw ConfigError(prefix + "." + key, "expected a number");
    return j[key].get<double>();
}
}  // namespace

ChannelModel channel_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("channel", "expected an object");
    if (!j.contains("kind") || !j["kind"].is_string())
        throw ConfigError("channel.kind", "expected \"constant\", \"rayleigh\" or \"rician\"");
    const auto kind = j["kind"].get<std::string>();
    try {
        if (kind == "constant") return ChannelModel::constant(number_field(j, "value", "channel", 1.0, false));
        if (kind == "rayleigh") return ChannelModel::rayleigh(number_field(j, "scale", "channel", 1.0, false));
        if (kind == "rician")
            return ChannelModel::rician(number_field(j, "k_factor", "channel", 0.0, true),
                                        number_field(j, "scale", "channel", 1.0, false));
    } catch (const InvalidArgument& e) {
        throw ConfigError("channel", e.what());
    }
    throw ConfigError("channel.kind", "unknown kind \"" + kind + "\"");
}

}  // namespace airmax
