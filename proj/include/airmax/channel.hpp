#pragma once

#include <complex>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "airmax/graph.hpp"
#include "airmax/rng.hpp"

namespace airmax {

/// Fading-gain distribution for the real positive channel of the protocols.
///
/// Rayleigh(scale) has density x/s^2 exp(-x^2/2s^2). Rician(K, scale) is the
/// magnitude of a complex Gaussian with per-component deviation `scale` and a
/// line-of-sight term of amplitude scale*sqrt(2K); K = 0 reduces to Rayleigh.
class ChannelModel {
public:
    enum class Kind { constant, rayleigh, rician };

    static ChannelModel constant(double value);
    static ChannelModel rayleigh(double scale);
    static ChannelModel rician(double k_factor, double scale);

    Kind kind() const noexcept { return kind_; }
    /// Constant gain, or the Rayleigh/Rician scale.
    double scale() const noexcept { return scale_; }
    double k_factor() const noexcept { return k_factor_; }

    /// One strictly positive gain.
    double sample(Stream& rng) const;
    /// A complex gain whose magnitude follows this model (baseband channel).
    std::complex<double> sample_complex(Stream& rng) const;
    /// Mean and variance E|xi - mean|^2 of sample_complex().
    std::complex<double> complex_mean() const noexcept;
    double complex_variance() const noexcept;

    friend bool operator==(const ChannelModel&, const ChannelModel&) = default;

private:
    ChannelModel(Kind kind, double scale, double k_factor)
        : kind_(kind), scale_(scale), k_factor_(k_factor) {}

    Kind kind_;
    double scale_;
    double k_factor_;
};

/// A real value tagged with the transmitter that produced it.
struct Signal {
    AgentId transmitter;
    double value;
};

struct Coefficient {
    AgentId transmitter;
    double gain;
};

/// Channel gains seen by one receiver in one round, sorted by transmitter.
struct CoefficientDraw {
    AgentId receiver = 0;
    std::vector<Coefficient> values;
};

/// One independent gain per transmitter. The gain for transmitter j comes from
/// rng.split(j), so the draw does not depend on the order of `transmitters`.
CoefficientDraw draw_coefficients(const ChannelModel& model, AgentId receiver,
                                  std::span<const AgentId> transmitters, const Stream& rng);

/// h_ij = xi_ij / sum_q xi_iq. Sums to 1 and every entry is in (0, 1].
std::vector<Coefficient> normalize(const CoefficientDraw& draw);

/// Noise-free multiple-access output sum_j xi_ij * signal_j. Throws when the
/// signal and draw transmitter sets differ.
double wmac_superpose(std::span<const Signal> signals, const CoefficientDraw& draw);

void to_json(nlohmann::json& j, const ChannelModel& model);
ChannelModel channel_from_json(const nlohmann::json& j);

}  // namespace airmax
