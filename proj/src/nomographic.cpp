#include "airmax/nomographic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "airmax/channel.hpp"
#include "airmax/error.hpp"

namespace airmax {

NomographicConfig NomographicConfig::uniform(double p, std::size_t n) {
    if (n == 0) throw InvalidArgument("nomographic: need at least one input");
    return {p, std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

void NomographicConfig::validate(std::size_t input_count) const {
    if (!(p > 0.0) || !std::isfinite(p)) throw InvalidArgument("nomographic: p must be positive");
    if (alphas.size() != input_count)
        throw InvalidArgument("nomographic: " + std::to_string(alphas.size()) + " weights for " +
                              std::to_string(input_count) + " inputs");
    if (input_count == 0) throw InvalidArgument("nomographic: empty input");
    bool any_positive = false;
    for (double a : alphas) {
        if (!(a >= 0.0) || !std::isfinite(a))
            throw InvalidArgument("nomographic: weights must be non-negative");
        any_positive = any_positive || a > 0.0;
    }
    if (!any_positive) throw InvalidArgument("nomographic: all weights are zero");
}

namespace {

// Largest input carrying a positive weight; both forms are factored around it.
double shift_of(std::span<const double> xs, const NomographicConfig& cfg) {
    double top = -INFINITY;
    for (std::size_t j = 0; j < xs.size(); ++j)
        if (cfg.alphas[j] > 0.0) top = std::max(top, xs[j]);
    return top;
}

}  // namespace

double sum_of_powers(std::span<const double> xs, const NomographicConfig& cfg) {
    cfg.validate(xs.size());
    for (double x : xs)
        if (!(x > 0.0)) throw InvalidArgument("sum_of_powers: inputs must be positive");
    // m (sum_j alpha_j (x_j/m)^p)^(1/p)
    const double m = shift_of(xs, cfg);
    long double acc = 0.0L;
    for (std::size_t j = 0; j < xs.size(); ++j)
        if (cfg.alphas[j] > 0.0)
            acc += cfg.alphas[j] * std::exp(static_cast<long double>(cfg.p) * std::log(static_cast<long double>(xs[j]) / m));
    return static_cast<double>(m * std::pow(acc, 1.0L / cfg.p));
}

double log_sum_exp(std::span<const double> xs, const NomographicConfig& cfg) {
    cfg.validate(xs.size());
    // m + (1/p) ln(sum_j alpha_j exp(p (x_j - m)))
    const double m = shift_of(xs, cfg);
    long double acc = 0.0L;
    for (std::size_t j = 0; j < xs.size(); ++j)
        if (cfg.alphas[j] > 0.0)
            acc += cfg.alphas[j] * std::exp(static_cast<long double>(cfg.p) * (static_cast<long double>(xs[j]) - m));
    return static_cast<double>(m + std::log(acc) / cfg.p);
}

double approximation_error(std::span<const double> xs, const NomographicConfig& cfg,
                           Approximation which) {
    const double f = which == Approximation::sum_of_powers ? sum_of_powers(xs, cfg)
                                                           : log_sum_exp(xs, cfg);
    return f - *std::max_element(xs.begin(), xs.end());
}

std::vector<FailurePoint> demo_failure_under_pipeline(std::span<const double> xs,
                                                      std::span<const double> p_values,
                                                      const NomographicConfig& cfg,
                                                      Approximation which,
                                                      const SignalRanges& ranges, double noise,
                                                      const Stream& rng, int trials) {
    cfg.validate(xs.size());
    if (!(noise >= 0.0)) throw InvalidArgument("demo: noise must be non-negative");
    if (trials < 1) throw InvalidArgument("demo: trials must be >= 1");
    if (which == Approximation::sum_of_powers && ranges.s_min() < 0.0)
        throw InvalidArgument("demo: sum-of-powers needs a non-negative state range");
    for (double x : xs)
        if (!ranges.contains(x)) throw InvalidArgument("demo: input outside the state range");

    const long double x_max = *std::max_element(xs.begin(), xs.end());

    std::vector<FailurePoint> table;
    for (double p : p_values) {
        if (!(p > 0.0)) throw InvalidArgument("demo: p values must be positive");
        // Pre-processed values are expressed in units of pre(S_max) so that
        // large p stays finite; the link is affine, so this only rescales it.
        const long double s_hi = ranges.s_max();
        const long double lp = p;
        auto pre = [&](long double x) {
            return which == Approximation::sum_of_powers ? std::pow(x / s_hi, lp)
                                                         : std::exp(lp * (x - s_hi));
        };
        auto post = [&](long double v) {
            return which == Approximation::sum_of_powers ? s_hi * std::pow(v, 1.0L / lp)
                                                         : s_hi + std::log(v) / lp;
        };
        const long double lo = pre(ranges.s_min());
        const long double hi = 1.0L;
        if (!(lo < hi))
            throw InvalidArgument("demo: degenerate pre-processed range at p = " + std::to_string(p));
        // Power-domain gain of the pre-processed link.
        const long double alpha_pre = (ranges.p_max() - ranges.p_min()) / (hi - lo);

        // The noiseless link output equals the weighted sum of the
        // pre-processed inputs; evaluating the affine power map itself would
        // round every value far below beta to P_min.
        long double clean = 0.0L;
        for (std::size_t j = 0; j < xs.size(); ++j)
            clean += cfg.alphas[j] * std::clamp(pre(xs[j]), lo, hi);

        const int draws = noise > 0.0 ? trials : 1;
        Stream noise_stream = rng.split(static_cast<std::uint64_t>(std::llround(p * 1e6)));
        double total_error = 0.0;
        for (int t = 0; t < draws; ++t) {
            const long double eta = noise > 0.0 ? noise * noise_stream.normal() : 0.0;
            const long double v = std::clamp(clean + eta / alpha_pre, lo, hi);
            const long double estimate = v <= lo ? ranges.s_min() : post(v);
            total_error += static_cast<double>(std::fabs(estimate - x_max));
        }
        table.push_back({p, total_error / draws});
    }
    return table;
}

}  // namespace airmax
