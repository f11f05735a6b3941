#pragma once

#include <span>
#include <vector>

#include "airmax/airlink.hpp"
#include "airmax/rng.hpp"

namespace airmax {

/// Sharpness p and per-input weights alpha_j for the smooth max
/// approximations. Needs p > 0, alpha_j >= 0, at least one alpha_j > 0.
struct NomographicConfig {
    double p = 1.0;
    std::vector<double> alphas;

    /// alpha_j = 1/n for every input.
    static NomographicConfig uniform(double p, std::size_t n);
    void validate(std::size_t input_count) const;
};

enum class Approximation { sum_of_powers, log_sum_exp };

/// (sum_j alpha_j x_j^p)^(1/p), evaluated in the log domain. All x_j > 0.
double sum_of_powers(std::span<const double> xs, const NomographicConfig& cfg);

/// (1/p) ln(sum_j alpha_j exp(p x_j)) with the usual max shift.
double log_sum_exp(std::span<const double> xs, const NomographicConfig& cfg);

/// Signed error f(xs, p) - max(xs).
double approximation_error(std::span<const double> xs, const NomographicConfig& cfg,
                           Approximation which);

struct FailurePoint {
    double p;
    double abs_error;
};

/// Pushes the pre-processed inputs (x^p or e^{px}) through the analog link.
/// S is mapped to the pre-processed interval, so the scaling gain collapses as
/// p grows, and zero-mean Gaussian noise with deviation `noise` in the power
/// domain reaches the de-scaled sum amplified by 1/alpha. The receiver clamps
/// to the pre-processed interval before post-processing. Gains are set to
/// alpha_j so the link output is the weighted sum. Each row is the mean
/// absolute error over `trials` noise draws (one draw when noise == 0).
std::vector<FailurePoint> demo_failure_under_pipeline(std::span<const double> xs,
                                                      std::span<const double> p_values,
                                                      const NomographicConfig& cfg,
                                                      Approximation which,
                                                      const SignalRanges& ranges, double noise,
                                                      const Stream& rng, int trials = 200);

/// Default noise deviation for the demo: 1e-3 (P_max - P_min).
inline double default_demo_noise(const SignalRanges& ranges) {
    return 1e-3 * (ranges.p_max() - ranges.p_min());
}

}  // namespace airmax
