#pragma once

#include <complex>
#include <span>
#include <vector>

#include "airmax/airlink.hpp"
#include "airmax/channel.hpp"
#include "airmax/wide.hpp"
#include "airmax/rng.hpp"

namespace airmax {

// M-symbol complex-baseband analog transceiver.
//
// Each transmitter sends sqrt(Phi(x)) on M unit-modulus symbols with i.i.d.
// uniform phases, plus a unit-amplitude pilot sequence on an orthogonal
// channel. A slow-fading complex gain per transmitter multiplies all M
// symbols of both sequences. The receiver takes energies, removes the noise
// floor, de-scales, and divides by the pilot energy.

using Sample = std::complex<Wide>;
using Waveform = std::vector<Sample>;

struct BasebandConfig {
    int m = 256;
    double noise_sigma2 = 1e-4;
    double pilot_noise_sigma2 = 1e-4;
    SignalRanges ranges = SignalRanges::defaults();

    /// Throws InvalidArgument on m < 1 or negative variances.
    void validate() const;
};

/// First and second moments of one transmitter's complex gain.
struct GainStats {
    std::complex<double> mean;
    double variance = 0.0;
};

struct ComplexCoefficient {
    AgentId transmitter;
    std::complex<double> gain;
    GainStats stats;
};

struct ComplexChannelDraw {
    std::vector<ComplexCoefficient> values;  // sorted by transmitter
};

struct Transmission {
    AgentId transmitter;
    Waveform wave;
};

/// Independent complex gains per transmitter, each from rng.split(j).
ComplexChannelDraw draw_complex_channel(const ChannelModel& model,
                                        std::span<const AgentId> transmitters, const Stream& rng);

/// sqrt(Phi(x)) * exp(i theta_m), m = 1..M. Throws when x is outside S.
Waveform modulate(const BasebandConfig& cfg, double x, Stream& rng);

/// r[m] = sum_j xi_j w_j[m] + eta[m], eta ~ CN(0, cfg.noise_sigma2).
Waveform receive_raw(const BasebandConfig& cfg, std::span<const Transmission> waves,
                     const ComplexChannelDraw& draw, Stream& rng);

/// Same superposition with an explicit noise variance (the pilot channel uses
/// cfg.pilot_noise_sigma2).
Waveform superpose(int m, std::span<const Transmission> waves, const ComplexChannelDraw& draw,
                   double noise_sigma2, Stream& rng);

/// Gamma(r) = ||r||^2 / M - sigma2.
double gamma(const BasebandConfig& cfg, std::span<const Sample> r, double sigma2);

/// Full pipeline: modulate data and pilot, superpose both over `draw`, apply
/// Gamma to each, de-scale the data energy with the pilot energy and return
/// f = Psi(gamma) / gamma'. Throws SnrViolation when gamma' <= 0.
double estimate_fhat(const BasebandConfig& cfg, std::span<const Signal> states,
                     const ComplexChannelDraw& draw, const Stream& rng);

/// |xi|^2-normalized weighted average the pipeline approximates.
double fhat_target(std::span<const Signal> states, const ComplexChannelDraw& draw);

struct NoiseMoments {
    double mean;
    double variance;
};

/// Closed-form moments of Delta = ||r||^2/M - sum_j mu_j^2 |xi_j|^2 given the
/// amplitudes mu_j. The bracketed sum is the single-symbol variance; Delta
/// averages M independent symbols, so the returned variance is that sum / M.
NoiseMoments noise_moments(const BasebandConfig& cfg, std::span<const double> mus,
                           std::span<const GainStats> stats);

/// One realization of Delta for amplitudes `mus`, drawing fresh gains from
/// `model`, phases and noise. Used to check noise_moments by Monte-Carlo.
double sample_noise_term(const BasebandConfig& cfg, std::span<const double> mus,
                         const ChannelModel& model, const Stream& rng);

}  // namespace airmax
