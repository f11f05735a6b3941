#include "airmax/protocols.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "airmax/error.hpp"

namespace airmax {

std::string_view to_string(Protocol p) {
    switch (p) {
        case Protocol::standard:
            return "standard";
        case Protocol::asymptotic:
            return "asymptotic";
        case Protocol::ftc:
            return "ftc";
    }
    return "?";
}

std::optional<Protocol> protocol_from_string(std::string_view name) {
    if (name == "standard") return Protocol::standard;
    if (name == "asymptotic") return Protocol::asymptotic;
    if (name == "ftc") return Protocol::ftc;
    return std::nullopt;
}

ConsensusState ConsensusState::initial(std::vector<double> x0) {
    ConsensusState s;
    const std::size_t n = x0.size();
    s.x = std::move(x0);
    s.y.assign(n, true);
    s.y_products.assign(n, true);
    return s;
}

namespace {

std::vector<AgentId> ids_of(std::span<const Signal> broadcasts) {
    std::vector<AgentId> ids;
    ids.reserve(broadcasts.size());
    for (const Signal& s : broadcasts) ids.push_back(s.transmitter);
    return ids;
}

void check_state(const DirectedTopology& g, const ConsensusState& state) {
    const std::size_t n = g.node_count();
    if (state.x.size() != n || state.y.size() != n || state.y_products.size() != n)
        throw InvalidArgument("consensus state size does not match the topology");
}

// Shared part of the superposition protocols: inputs, max update and the
// indicator y_i(k+1) = [x_i(k) >= u_i(k)].
struct SuperpositionRound {
    std::vector<double> u;
    std::vector<double> x;
    std::vector<bool> indicator;
};

SuperpositionRound superposition_round(const DirectedTopology& g, const ConsensusState& state,
                                       const Link& link) {
    check_state(g, state);
    const std::size_t n = g.node_count();
    SuperpositionRound round{std::vector<double>(n, 0.0), state.x, std::vector<bool>(n, true)};
    std::vector<Signal> broadcasts;
    for (AgentId i = 0; i < n; ++i) {
        broadcasts.clear();
        for (AgentId j : g.in_neighbors(i))
            if (state.y[j]) broadcasts.push_back({j, state.x[j]});
        const double u = broadcasts.empty() ? 0.0 : link.receive(i, broadcasts, state.k);
        round.u[i] = u;
        round.x[i] = std::max(state.x[i], u);
        round.indicator[i] = state.x[i] >= u;
    }
    return round;
}

}  // namespace

double AirLink::receive(AgentId receiver, std::span<const Signal> broadcasts,
                        std::uint64_t iteration) const {
    return receive_round(ranges_, broadcasts, draw(receiver, broadcasts, iteration));
}

CoefficientDraw AirLink::draw(AgentId receiver, std::span<const Signal> broadcasts,
                              std::uint64_t iteration) const {
    const auto ids = ids_of(broadcasts);
    return draw_coefficients(model_, receiver, ids, stream_.split(iteration).split(receiver));
}

BasebandLink::BasebandLink(BasebandConfig cfg, ChannelModel model, Stream stream)
    : cfg_(cfg), model_(model), stream_(stream) {
    cfg_.validate();
}

double BasebandLink::receive(AgentId receiver, std::span<const Signal> broadcasts,
                             std::uint64_t iteration) const {
    const Stream round = stream_.split(iteration).split(receiver);
    const auto ids = ids_of(broadcasts);
    const ComplexChannelDraw draw = draw_complex_channel(model_, ids, round.split("gains"));
    const double u = estimate_fhat(cfg_, broadcasts, draw, round.split("transceiver"));
    // the receiver knows S; noisy estimates are projected back onto it
    return std::clamp(u, cfg_.ranges.s_min(), cfg_.ranges.s_max());
}

StepOutcome step_standard(const DirectedTopology& g, const ConsensusState& state) {
    check_state(g, state);
    StepOutcome out{state, std::vector<double>(g.node_count(), 0.0), g.node_count()};
    for (AgentId i = 0; i < g.node_count(); ++i) {
        double best = state.x[i];
        double heard = 0.0;
        for (AgentId j : g.in_neighbors(i)) {
            best = std::max(best, state.x[j]);
            heard = std::max(heard, state.x[j]);
        }
        out.next.x[i] = best;
        out.u[i] = heard;
    }
    out.next.k = state.k + 1;
    return out;
}

StepOutcome step_asymptotic(const DirectedTopology& g, const ConsensusState& state,
                            const Link& link) {
    auto round = superposition_round(g, state, link);
    StepOutcome out{state, std::move(round.u), 2};
    out.next.x = std::move(round.x);
    out.next.y = std::move(round.indicator);
    out.next.k = state.k + 1;
    return out;
}

StepOutcome step_ftc(const DirectedTopology& g, const ConsensusState& state, const Link& link) {
    auto round = superposition_round(g, state, link);
    StepOutcome out{state, std::move(round.u), 2};
    out.next.x = std::move(round.x);
    out.next.k = state.k + 1;

    if (state.k == 2 * state.t_window) {
        out.next.y = state.y_products;
        out.next.t_window = state.k;
        // the next window starts at t = k; y(k+1) already folds in y(k)
        out.next.y_products = out.next.y;
    } else {
        out.next.y = std::move(round.indicator);
        if (out.next.k >= state.t_window)
            for (std::size_t i = 0; i < out.next.y.size(); ++i)
                out.next.y_products[i] = state.y_products[i] && out.next.y[i];
    }
    return out;
}

std::uint64_t t_closed_form(std::uint64_t k) {
    if (k < 2) return 2;
    // ceil(log2(k)) == bit_width(k - 1)
    const auto p = static_cast<unsigned>(std::bit_width(k - 1)) - 1;
    return std::uint64_t{1} << p;
}

double lyapunov_v(std::span<const double> now, std::span<const double> prev, double x_star) {
    if (now.size() != prev.size()) throw InvalidArgument("lyapunov_v: vectors differ in length");
    long double sum = 0.0L;
    for (std::size_t i = 0; i < now.size(); ++i) {
        if (now[i] > x_star || prev[i] > x_star)
            throw InvalidArgument("lyapunov_v: x* is below a state component");
        sum += static_cast<long double>(now[i]) + prev[i];
    }
    return static_cast<double>(2.0L * now.size() * x_star - sum);
}

bool is_consensus(std::span<const double> x, double x_star, double rel_tol) {
    const double tol = rel_tol * std::max(1.0, std::fabs(x_star));
    return std::all_of(x.begin(), x.end(), [&](double v) { return std::fabs(v - x_star) <= tol; });
}

namespace {

double trace_v(std::span<const double> now, std::span<const double> prev, double x_star) {
    long double sum = 0.0L;
    for (std::size_t i = 0; i < now.size(); ++i) sum += static_cast<long double>(now[i]) + prev[i];
    return static_cast<double>(2.0L * now.size() * x_star - sum);
}

TraceRecord record_of(const ConsensusState& s, std::span<const double> prev_x, double x_star) {
    return {s.k, s.x, s.y, s.t_window, {}, trace_v(s.x, prev_x, x_star)};
}

}  // namespace

RunResult run(const RunSpec& spec) {
    const DirectedTopology& g = spec.topology;
    if (spec.x0.size() != g.node_count())
        throw InvalidArgument("run: x0 has " + std::to_string(spec.x0.size()) +
                              " entries for " + std::to_string(g.node_count()) + " agents");
    if (spec.max_iters < 1) throw InvalidArgument("run: max_iters must be >= 1");
    if (!(spec.rel_tol > 0.0)) throw InvalidArgument("run: rel_tol must be positive");
    if (spec.protocol != Protocol::standard) {
        if (!spec.link) throw InvalidArgument("run: superposition protocols need a link");
        if (!is_strongly_connected(g))
            throw InvalidArgument("run: topology must be strongly connected for the " +
                                  std::string(to_string(spec.protocol)) + " protocol");
    }

    RunResult result;
    result.x_star = *std::max_element(spec.x0.begin(), spec.x0.end());

    ConsensusState state = ConsensusState::initial(spec.x0);
    result.trace.push_back(record_of(state, spec.x0, result.x_star));

    while (true) {
        if (is_consensus(state.x, result.x_star, spec.rel_tol)) {
            result.converged = true;
            break;
        }
        if (result.iterations == spec.max_iters) break;

        StepOutcome out;
        switch (spec.protocol) {
            case Protocol::standard:
                out = step_standard(g, state);
                break;
            case Protocol::asymptotic:
                out = step_asymptotic(g, state, *spec.link);
                break;
            case Protocol::ftc:
                out = step_ftc(g, state, *spec.link);
                break;
        }
        for (std::size_t i = 0; i < state.x.size(); ++i)
            if (out.next.x[i] < state.x[i] || out.next.x[i] > result.x_star)
                result.monotone_bounded = false;

        result.trace.back().u = std::move(out.u);
        result.slots += out.slots_consumed;
        ++result.iterations;
        const std::vector<double> prev = std::move(state.x);
        state = std::move(out.next);
        result.trace.push_back(record_of(state, prev, result.x_star));
    }
    result.final_x = state.x;
    return result;
}

}  // namespace airmax
