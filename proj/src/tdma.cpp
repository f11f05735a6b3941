#include "airmax/tdma.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "airmax/error.hpp"
#include "airmax/protocols.hpp"

namespace airmax {

std::uint64_t standard_iterations_until_stable(const DirectedTopology& g, std::vector<double> x0) {
    ConsensusState state = ConsensusState::initial(std::move(x0));
    std::uint64_t changed = 0;
    while (true) {
        StepOutcome out = step_standard(g, state);
        if (out.next.x == state.x) return changed;
        ++changed;
        state = std::move(out.next);
    }
}

std::vector<std::size_t> size_range(std::size_t lo, std::size_t hi, std::size_t step) {
    std::vector<std::size_t> sizes;
    for (std::size_t n = lo; n <= hi; n += std::max<std::size_t>(step, 1)) sizes.push_back(n);
    return sizes;
}

namespace {

struct Trial {
    DirectedTopology topology;
    std::vector<double> x0;
};

Trial make_trial(const CompareOptions& opt, const Stream& stream, std::size_t n) {
    const double density = opt.mean_degree > 0.0
                               ? std::min(1.0, opt.mean_degree / static_cast<double>(n - 1))
                               : opt.density;
    Trial t{random_strongly_connected(n, density, stream.split("topology")), {}};
    Stream xs = stream.split("x0");
    const double lo = opt.ranges.s_min();
    const double width = opt.ranges.s_max() - lo;
    t.x0.resize(n);
    for (double& v : t.x0) v = std::min(opt.ranges.s_max(), lo + width * xs.uniform());
    return t;
}

ComparisonRecord run_trial(const CompareOptions& opt, std::size_t n, std::size_t trial) {
    const Stream stream = Stream(mix64(opt.base_seed)).split(n).split(trial);

    // Each protocol regenerates its system from the trial stream; the
    // fingerprints must agree.
    const Trial for_standard = make_trial(opt, stream, n);
    const Trial for_ftc = make_trial(opt, stream, n);
    if (for_standard.topology.fingerprint() != for_ftc.topology.fingerprint() ||
        for_standard.x0 != for_ftc.x0)
        throw std::logic_error("compare_tdma: trial systems differ between protocols");

    ComparisonRecord rec;
    rec.n = n;
    rec.trial = trial;
    rec.topology_fingerprint = for_standard.topology.fingerprint();
    rec.standard_iterations = standard_iterations_until_stable(for_standard.topology, for_standard.x0);

    auto link = std::make_shared<AirLink>(opt.channel, opt.ranges, stream.split("channel"));
    const RunResult ftc = run(RunSpec{for_ftc.topology, for_ftc.x0, Protocol::ftc, link,
                                      opt.rel_tol, opt.max_iters});
    rec.ftc_iterations = ftc.iterations;
    rec.ftc_converged = ftc.converged;

    rec.k_t_slots = n * rec.standard_iterations;
    rec.k_b_slots = ftc.slots;
    if (rec.k_b_slots > 0)
        rec.ratio = static_cast<double>(rec.k_t_slots) / static_cast<double>(rec.k_b_slots);
    else
        rec.ratio = rec.k_t_slots == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    return rec;
}

}  // namespace

std::vector<ComparisonRecord> compare_tdma(const CompareOptions& opt) {
    if (opt.trials_per_n < 1) throw InvalidArgument("compare_tdma: trials_per_n must be >= 1");
    if (opt.sizes.empty()) throw InvalidArgument("compare_tdma: no network sizes");
    for (std::size_t n : opt.sizes)
        if (n < 3 || n > 100)
            throw InvalidArgument("compare_tdma: network size " + std::to_string(n) +
                                  " outside [3, 100]");

    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t n : opt.sizes)
        for (std::size_t t = 0; t < opt.trials_per_n; ++t) jobs.emplace_back(n, t);

    std::vector<ComparisonRecord> records(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                records[i] = run_trial(opt, jobs[i].first, jobs[i].second);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(opt.workers, static_cast<unsigned>(jobs.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t + 1 < count; ++t) pool.emplace_back(worker);
        worker();
    }
    if (failure) std::rethrow_exception(failure);
    return records;
}

}  // namespace airmax
