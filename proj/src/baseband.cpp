#include "airmax/baseband.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "airmax/error.hpp"
#include "airmax/wide.hpp"

namespace airmax {

namespace {

constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;

// e^{i theta} with theta uniform; renormalized so |v|^2 = 1 to binary128
// precision.
Sample unit_phasor(Stream& rng) {
    const long double theta = kTwoPi * static_cast<long double>(rng.uniform());
    const Sample v(static_cast<Wide>(std::cos(theta)), static_cast<Wide>(std::sin(theta)));
    return v / wide_sqrt(std::norm(v));
}

Sample complex_noise(double sigma2, Stream& rng) {
    const Wide sd = wide_sqrt(static_cast<Wide>(sigma2) / 2);
    const Wide re = rng.normal();
    const Wide im = rng.normal();
    return {sd * re, sd * im};
}

Wide energy_per_symbol(std::span<const Sample> r) {
    WideSum e;
    for (const Sample& s : r) e.add(std::norm(s));
    return e.value() / static_cast<Wide>(r.size());
}

const ComplexCoefficient& find_gain(const ComplexChannelDraw& draw, AgentId j) {
    auto it = std::lower_bound(
        draw.values.begin(), draw.values.end(), j,
        [](const ComplexCoefficient& c, AgentId id) { return c.transmitter < id; });
    if (it == draw.values.end() || it->transmitter != j)
        throw InvalidArgument("no complex gain for transmitter " + std::to_string(j));
    return *it;
}

}  // namespace

void BasebandConfig::validate() const {
    if (m < 1) throw InvalidArgument("baseband: m must be >= 1");
    if (!(noise_sigma2 >= 0.0) || !(pilot_noise_sigma2 >= 0.0))
        throw InvalidArgument("baseband: noise variances must be non-negative");
}

ComplexChannelDraw draw_complex_channel(const ChannelModel& model,
                                        std::span<const AgentId> transmitters, const Stream& rng) {
    if (transmitters.empty()) throw InvalidArgument("draw_complex_channel: empty transmitter set");
    ComplexChannelDraw draw;
    const GainStats stats{model.complex_mean(), model.complex_variance()};
    for (AgentId j : transmitters) {
        Stream link = rng.split(j);
        draw.values.push_back({j, model.sample_complex(link), stats});
    }
    std::sort(draw.values.begin(), draw.values.end(),
              [](const auto& a, const auto& b) { return a.transmitter < b.transmitter; });
    return draw;
}

Waveform modulate(const BasebandConfig& cfg, double x, Stream& rng) {
    cfg.validate();
    if (!cfg.ranges.contains(x))
        throw InvalidArgument("modulate: state " + std::to_string(x) + " outside S");
    const Wide amplitude = wide_sqrt(static_cast<Wide>(cfg.ranges.alpha()) * x +
                                     static_cast<Wide>(cfg.ranges.beta()));
    Waveform w(static_cast<std::size_t>(cfg.m));
    for (Sample& s : w) s = amplitude * unit_phasor(rng);
    return w;
}

Waveform superpose(int m, std::span<const Transmission> waves, const ComplexChannelDraw& draw,
                   double noise_sigma2, Stream& rng) {
    Waveform r(static_cast<std::size_t>(m), Sample{0, 0});
    for (const Transmission& t : waves) {
        if (t.wave.size() != r.size())
            throw InvalidArgument("superpose: waveform of transmitter " +
                                  std::to_string(t.transmitter) + " has length " +
                                  std::to_string(t.wave.size()) + ", expected " +
                                  std::to_string(m));
        const std::complex<double> g = find_gain(draw, t.transmitter).gain;
        const Sample gain(g.real(), g.imag());
        for (std::size_t k = 0; k < r.size(); ++k) r[k] += gain * t.wave[k];
    }
    if (noise_sigma2 > 0.0)
        for (Sample& s : r) s += complex_noise(noise_sigma2, rng);
    return r;
}

Waveform receive_raw(const BasebandConfig& cfg, std::span<const Transmission> waves,
                     const ComplexChannelDraw& draw, Stream& rng) {
    cfg.validate();
    return superpose(cfg.m, waves, draw, cfg.noise_sigma2, rng);
}

double gamma(const BasebandConfig& cfg, std::span<const Sample> r, double sigma2) {
    if (r.size() != static_cast<std::size_t>(cfg.m))
        throw InvalidArgument("gamma: received vector length differs from M");
    return static_cast<double>(energy_per_symbol(r) - sigma2);
}

double estimate_fhat(const BasebandConfig& cfg, std::span<const Signal> states,
                     const ComplexChannelDraw& draw, const Stream& rng) {
    cfg.validate();
    if (states.empty()) throw InvalidArgument("estimate_fhat: no transmitters");

    std::vector<Transmission> data;
    std::vector<Transmission> pilots;
    data.reserve(states.size());
    pilots.reserve(states.size());
    const Stream data_phases = rng.split("data-phases");
    const Stream pilot_phases = rng.split("pilot-phases");
    for (const Signal& s : states) {
        Stream phases = data_phases.split(s.transmitter);
        data.push_back({s.transmitter, modulate(cfg, s.value, phases)});
        Stream pphases = pilot_phases.split(s.transmitter);
        Waveform p(static_cast<std::size_t>(cfg.m));
        for (Sample& v : p) v = unit_phasor(pphases);
        pilots.push_back({s.transmitter, std::move(p)});
    }

    Stream noise = rng.split("data-noise");
    Stream pilot_noise = rng.split("pilot-noise");
    const Waveform r = superpose(cfg.m, data, draw, cfg.noise_sigma2, noise);
    const Waveform r_pilot = superpose(cfg.m, pilots, draw, cfg.pilot_noise_sigma2, pilot_noise);

    const Wide g = energy_per_symbol(r) - cfg.noise_sigma2;
    const Wide g_pilot = energy_per_symbol(r_pilot) - cfg.pilot_noise_sigma2;
    if (!(g_pilot > 0))
        throw SnrViolation("estimate_fhat: pilot energy after noise removal is not positive");

    const Wide alpha = cfg.ranges.alpha();
    const Wide beta = cfg.ranges.beta();
    const Wide psi = (g - beta * g_pilot) / alpha;
    return static_cast<double>(psi / g_pilot);
}

double fhat_target(std::span<const Signal> states, const ComplexChannelDraw& draw) {
    WideSum num;
    WideSum den;
    for (const Signal& s : states) {
        const std::complex<double> g = find_gain(draw, s.transmitter).gain;
        const Wide w = std::norm(std::complex<Wide>(g.real(), g.imag()));
        num.add(w * s.value);
        den.add(w);
    }
    return static_cast<double>(num.value() / den.value());
}

NoiseMoments noise_moments(const BasebandConfig& cfg, std::span<const double> mus,
                           std::span<const GainStats> stats) {
    cfg.validate();
    if (mus.size() != stats.size())
        throw InvalidArgument("noise_moments: amplitude and statistics counts differ");
    const std::size_t n = mus.size();
    std::vector<double> spread(n);
    for (std::size_t j = 0; j < n; ++j)
        spread[j] = mus[j] * mus[j] * (stats[j].variance - std::norm(stats[j].mean));

    const double s2 = cfg.noise_sigma2;
    double cross = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t p = j + 1; p < n; ++p) cross += spread[j] * spread[p];
    double own = 0.0;
    for (double v : spread) own += v;

    const double per_symbol = 2.0 * cross + 2.0 * s2 * own + s2 * s2;
    return {s2, per_symbol / cfg.m};
}

double sample_noise_term(const BasebandConfig& cfg, std::span<const double> mus,
                         const ChannelModel& model, const Stream& rng) {
    cfg.validate();
    std::vector<AgentId> ids(mus.size());
    for (std::size_t j = 0; j < ids.size(); ++j) ids[j] = j;
    const ComplexChannelDraw draw = draw_complex_channel(model, ids, rng.split("gains"));

    std::vector<Transmission> waves;
    const Stream phases = rng.split("phases");
    for (std::size_t j = 0; j < mus.size(); ++j) {
        Stream ph = phases.split(j);
        Waveform w(static_cast<std::size_t>(cfg.m));
        for (Sample& s : w) s = static_cast<Wide>(mus[j]) * unit_phasor(ph);
        waves.push_back({j, std::move(w)});
    }
    Stream noise = rng.split("noise");
    const Waveform r = superpose(cfg.m, waves, draw, cfg.noise_sigma2, noise);

    Wide desired = 0;
    for (std::size_t j = 0; j < mus.size(); ++j) {
        const std::complex<double> g = draw.values[j].gain;
        desired += static_cast<Wide>(mus[j]) * mus[j] * std::norm(std::complex<Wide>(g.real(), g.imag()));
    }
    return static_cast<double>(energy_per_symbol(r) - desired);
}

}  // namespace airmax
