#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "airmax/airlink.hpp"
#include "airmax/baseband.hpp"
#include "airmax/channel.hpp"
#include "airmax/graph.hpp"

namespace airmax {

enum class Protocol { standard, asymptotic, ftc };

std::string_view to_string(Protocol p);
std::optional<Protocol> protocol_from_string(std::string_view name);

/// Full state w(k) of the multi-agent system plus the finite-time window.
struct ConsensusState {
    std::vector<double> x;          // information states
    std::vector<bool> y;            // broadcast authorizations
    std::uint64_t t_window = 2;     // T(k), shared by all agents
    std::vector<bool> y_products;   // prod of y_i(t) for t in [T(k), k]
    std::uint64_t k = 0;

    /// x(0) = x0, y(0) = 1, T(0) = 2, empty window product.
    static ConsensusState initial(std::vector<double> x0);

    friend bool operator==(const ConsensusState&, const ConsensusState&) = default;
};

struct StepOutcome {
    ConsensusState next;
    std::vector<double> u;  // received inputs; 0 where nobody was authorized
    std::uint64_t slots_consumed = 0;
};

/// Computes the superposed input u_i from the broadcasts of the authorized
/// in-neighbors in one round. Implementations must be deterministic in
/// (receiver, broadcasts, iteration).
class Link {
public:
    virtual ~Link() = default;
    virtual double receive(AgentId receiver, std::span<const Signal> broadcasts,
                           std::uint64_t iteration) const = 0;
};

/// Real positive fading plus the pilot/de-scaling receiver. Gains for
/// (iteration, receiver, transmitter) come from their own stream position.
class AirLink final : public Link {
public:
    AirLink(ChannelModel model, SignalRanges ranges, Stream stream)
        : model_(model), ranges_(ranges), stream_(stream) {}

    double receive(AgentId receiver, std::span<const Signal> broadcasts,
                   std::uint64_t iteration) const override;

    CoefficientDraw draw(AgentId receiver, std::span<const Signal> broadcasts,
                         std::uint64_t iteration) const;

private:
    ChannelModel model_;
    SignalRanges ranges_;
    Stream stream_;
};

/// M-symbol baseband transceiver with complex slow fading and receiver noise.
/// Its output is only approximately a convex combination.
class BasebandLink final : public Link {
public:
    BasebandLink(BasebandConfig cfg, ChannelModel model, Stream stream);

    double receive(AgentId receiver, std::span<const Signal> broadcasts,
                   std::uint64_t iteration) const override;

private:
    BasebandConfig cfg_;
    ChannelModel model_;
    Stream stream_;
};

/// x_i <- max over N_i and i itself. One TDMA slot per agent.
StepOutcome step_standard(const DirectedTopology& g, const ConsensusState& state);

/// x_i <- max(x_i, u_i); y_i <- [x_i >= u_i]. Two slots (data + pilot).
StepOutcome step_asymptotic(const DirectedTopology& g, const ConsensusState& state,
                            const Link& link);

/// As step_asymptotic, except at k = 2T(k), where y_i becomes the product of
/// y_i over [T(k), k] and the window restarts at T = k.
StepOutcome step_ftc(const DirectedTopology& g, const ConsensusState& state, const Link& link);

/// 2^p(k) with p(k) = ceil(log2(k) - 1) for k >= 2, 1 otherwise. Diagnostic
/// only: the recurrence in step_ftc is authoritative and differs at k = 2.
std::uint64_t t_closed_form(std::uint64_t k);

/// V = 2n x* - sum_i (x_i(k) + x_i(k-1)). Throws when x* is below a component.
double lyapunov_v(std::span<const double> now, std::span<const double> prev, double x_star);

struct TraceRecord {
    std::uint64_t k = 0;
    std::vector<double> x;
    std::vector<bool> y;
    std::uint64_t t_window = 0;
    std::vector<double> u;  // inputs computed at step k; empty on the last record
    double v_lyapunov = 0.0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct RunSpec {
    DirectedTopology topology;
    std::vector<double> x0;
    Protocol protocol = Protocol::ftc;
    std::shared_ptr<const Link> link;  // unused by the standard protocol
    double rel_tol = 1e-9;
    std::uint64_t max_iters = 10000;
};

struct RunResult {
    std::vector<TraceRecord> trace;
    bool converged = false;
    std::uint64_t iterations = 0;
    std::uint64_t slots = 0;
    double x_star = 0.0;
    std::vector<double> final_x;
    /// x_i(k) <= x_i(k+1) <= x* held at every step.
    bool monotone_bounded = true;
};

bool is_consensus(std::span<const double> x, double x_star, double rel_tol);

/// Steps the protocol until max_i |x_i - x*| <= rel_tol max(1, |x*|) or
/// max_iters steps. Throws InvalidArgument for the superposition protocols on
/// a topology that is not strongly connected.
RunResult run(const RunSpec& spec);

}  // namespace airmax
