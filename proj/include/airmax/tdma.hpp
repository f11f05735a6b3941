#pragma once

#include <cstdint>
#include <vector>

#include "airmax/airlink.hpp"
#include "airmax/channel.hpp"
#include "airmax/graph.hpp"

namespace airmax {

/// Slot cost of max-consensus for one random system: the standard protocol
/// over TDMA (n slots per iteration) against the finite-time superposition
/// protocol (2 slots per iteration).
struct ComparisonRecord {
    std::size_t n = 0;
    std::size_t trial = 0;
    std::uint64_t k_t_slots = 0;
    std::uint64_t k_b_slots = 0;
    double ratio = 0.0;  // k_t_slots / k_b_slots

    std::uint64_t standard_iterations = 0;
    std::uint64_t ftc_iterations = 0;
    bool ftc_converged = false;
    std::uint64_t topology_fingerprint = 0;
};

struct CompareOptions {
    std::vector<std::size_t> sizes;
    std::size_t trials_per_n = 1;
    ChannelModel channel = ChannelModel::rayleigh(1.0);
    std::uint64_t base_seed = 0;
    /// Extra-arc probability on top of the random Hamiltonian cycle; used
    /// only when mean_degree is 0.
    double density = 0.1;
    /// Extra-arc probability min(1, mean_degree / (n - 1)), so the expected
    /// number of extra in-neighbors stays fixed as n grows.
    double mean_degree = 2.0;
    SignalRanges ranges = SignalRanges::defaults();
    double rel_tol = 1e-9;
    std::uint64_t max_iters = 10000;
    unsigned workers = 1;
};

/// Iterates the standard protocol until the state stops changing and returns
/// the number of steps that changed it (exact: values are only copied).
std::uint64_t standard_iterations_until_stable(const DirectedTopology& g, std::vector<double> x0);

/// One record per (n, trial), ordered by n then trial. Each trial draws its
/// topology and x0 from a stream keyed by (base_seed, n, trial), so the
/// output does not depend on `workers`. Throws InvalidArgument for sizes
/// outside [3, 100] or zero trials.
std::vector<ComparisonRecord> compare_tdma(const CompareOptions& options);

/// Inclusive size range helper.
std::vector<std::size_t> size_range(std::size_t lo, std::size_t hi, std::size_t step = 1);

}  // namespace airmax
