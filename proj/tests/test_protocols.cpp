#include <gtest/gtest.h>

#include <algorithm>
#include <memory>
#include <vector>

#include "airmax/error.hpp"
#include "airmax/protocols.hpp"

using namespace airmax;

namespace {

std::shared_ptr<const Link> rayleigh_link(std::uint64_t seed) {
    return std::make_shared<AirLink>(ChannelModel::rayleigh(1.0), SignalRanges::defaults(), Stream(seed));
}

std::vector<double> random_states(std::size_t n, Stream& s) {
    std::vector<double> x(n);
    for (double& v : x) v = std::min(10.0, 10.0 * s.uniform());
    return x;
}

// Equal-gain link: u is the plain average of the authorized neighbors.
class AverageLink final : public Link {
public:
    double receive(AgentId, std::span<const Signal> b, std::uint64_t) const override {
        long double sum = 0;
        for (const auto& s : b) sum += s.value;
        return static_cast<double>(sum / b.size());
    }
};

// Reference finite-time protocol that keeps the full authorization history
// and multiplies it out explicitly at every switch.
std::vector<ConsensusState> reference_ftc(const DirectedTopology& g, std::vector<double> x0, int steps) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<bool>> y_hist{std::vector<bool>(n, true)};
    std::vector<std::vector<double>> x_hist{x0};
    std::vector<std::uint64_t> t_hist{2};
    AverageLink link;
    std::vector<ConsensusState> out;
    for (int k = 0; k < steps; ++k) {
        const auto& x = x_hist.back();
        const auto& y = y_hist.back();
        const std::uint64_t t = t_hist.back();
        std::vector<double> nx(n);
        std::vector<bool> ny(n);
        for (AgentId i = 0; i < n; ++i) {
            std::vector<Signal> b;
            for (AgentId j : g.in_neighbors(i))
                if (y[j]) b.push_back({j, x[j]});
            const double u = b.empty() ? 0.0 : link.receive(i, b, k);
            nx[i] = std::max(x[i], u);
            ny[i] = x[i] >= u;
        }
        std::uint64_t nt = t;
        if (static_cast<std::uint64_t>(k) == 2 * t) {
            for (AgentId i = 0; i < n; ++i) {
                bool prod = true;
                for (std::uint64_t s = t; s <= static_cast<std::uint64_t>(k); ++s) prod = prod && y_hist[s][i];
                ny[i] = prod;
            }
            nt = k;
        }
        x_hist.push_back(nx);
        y_hist.push_back(ny);
        t_hist.push_back(nt);
        ConsensusState s;
        s.x = nx;
        s.y = ny;
        s.t_window = nt;
        s.k = k + 1;
        out.push_back(s);
    }
    return out;
}

std::size_t count_at(const std::vector<double>& x, double x_star) {
    return static_cast<std::size_t>(
        std::count_if(x.begin(), x.end(), [&](double v) { return v >= x_star - 1e-9 * std::max(1.0, x_star); }));
}

}  // namespace

TEST(Standard, StepExamples) {
    auto s = ConsensusState::initial({3, 4, 3, 3});
    EXPECT_EQ(step_standard(DirectedTopology::complete(4), s).next.x, (std::vector<double>{4, 4, 4, 4}));
    s = ConsensusState::initial({4, 0, 0, 0});
    const auto out = step_standard(DirectedTopology::cycle(4), s);
    EXPECT_EQ(out.next.x, (std::vector<double>{4, 4, 0, 0}));
    EXPECT_EQ(out.slots_consumed, 4u);
    s = ConsensusState::initial({2, 2, 2});
    EXPECT_EQ(step_standard(DirectedTopology::cycle(3), s).next.x, s.x);
}

TEST(Standard, ConvergesWithinDiameter) {
    Stream s(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + s.below(30);
        const auto g = random_strongly_connected(n, 0.05 + 0.3 * s.uniform(), s.split(trial));
        const auto r = run({g, random_states(n, s), Protocol::standard, nullptr, 1e-12, 1000});
        ASSERT_TRUE(r.converged);
        ASSERT_LE(r.iterations, diameter_bound(g));
        ASSERT_EQ(r.slots, n * r.iterations);
        ASSERT_TRUE(r.monotone_bounded);
    }
    const auto r = run({DirectedTopology::complete(6), {1, 2, 3, 4, 5, 6}, Protocol::standard, nullptr, 1e-9, 10});
    EXPECT_EQ(r.iterations, 1u);
}

TEST(Asymptotic, StepRules) {
    const auto g = DirectedTopology::cycle(3);  // 0 -> 1 -> 2 -> 0
    AverageLink link;
    auto s = ConsensusState::initial({1, 5, 9});
    const auto out = step_asymptotic(g, s, link);
    // agent 1 hears 1 < 5: keeps state and authorization
    EXPECT_EQ(out.next.x[1], 5.0);
    EXPECT_TRUE(out.next.y[1]);
    // agent 0 hears 9 > 1: adopts it and loses authorization
    EXPECT_EQ(out.next.x[0], 9.0);
    EXPECT_FALSE(out.next.y[0]);
    EXPECT_EQ(out.u, (std::vector<double>{9, 1, 5}));
    EXPECT_EQ(out.slots_consumed, 2u);

    // nobody authorized around agent 1: u = 0, state kept, authorization regained
    s.y = {false, true, true};
    const auto quiet = step_asymptotic(g, s, link);
    EXPECT_EQ(quiet.u[1], 0.0);
    EXPECT_EQ(quiet.next.x[1], 5.0);
    EXPECT_TRUE(quiet.next.y[1]);
}

TEST(Ftc, WindowTrajectory) {
    const auto g = DirectedTopology::cycle(4);
    auto link = rayleigh_link(1);
    auto s = ConsensusState::initial({1, 2, 3, 4});
    std::vector<std::uint64_t> t{s.t_window};
    for (int k = 0; k < 16; ++k) {
        s = step_ftc(g, s, *link).next;
        t.push_back(s.t_window);
    }
    for (int k = 0; k <= 4; ++k) EXPECT_EQ(t[k], 2u) << k;
    for (int k = 5; k <= 8; ++k) EXPECT_EQ(t[k], 4u) << k;
    for (int k = 9; k <= 16; ++k) EXPECT_EQ(t[k], 8u) << k;
}

TEST(Ftc, ClosedFormWindow) {
    EXPECT_EQ(t_closed_form(0), 2u);
    EXPECT_EQ(t_closed_form(5), 4u);
    EXPECT_EQ(t_closed_form(9), 8u);
    EXPECT_EQ(t_closed_form(2), 1u);
    // Away from k = 2 the closed form agrees with the recurrence.
    const auto g = DirectedTopology::cycle(3);
    AverageLink link;
    auto s = ConsensusState::initial({1, 2, 3});
    for (std::uint64_t k = 0; k < 300; ++k) {
        if (k != 2) ASSERT_EQ(s.t_window, t_closed_form(k)) << k;
        s = step_ftc(g, s, link).next;
    }
}

TEST(Ftc, MatchesExplicitHistoryProducts) {
    Stream s(404);
    AverageLink link;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + s.below(10);
        const auto g = random_strongly_connected(n, 0.1 + 0.3 * s.uniform(), s.split(trial));
        const auto x0 = random_states(n, s);
        const auto expected = reference_ftc(g, x0, 40);
        auto state = ConsensusState::initial(x0);
        for (const auto& e : expected) {
            state = step_ftc(g, state, link).next;
            ASSERT_EQ(state.x, e.x);
            ASSERT_EQ(state.y, e.y);
            ASSERT_EQ(state.t_window, e.t_window);
        }
    }
}

TEST(Ftc, ZeroInWindowBlocksAtSwitch) {
    const auto g = DirectedTopology::complete(3);
    AverageLink link;
    auto s = ConsensusState::initial({1, 2, 10});
    // step to k = 4 = 2 T(k); agents 0 and 1 lose authorization on the way
    for (int k = 0; k < 4; ++k) s = step_ftc(g, s, link).next;
    ASSERT_EQ(s.k, 4u);
    const auto out = step_ftc(g, s, link);
    EXPECT_FALSE(out.next.y[0]);
    EXPECT_FALSE(out.next.y[1]);
    EXPECT_TRUE(out.next.y[2]);
}

TEST(Ftc, TwoAgents) {
    const auto r = run({DirectedTopology::bidirectional_path(2), {1, 2}, Protocol::ftc, rayleigh_link(3), 1e-9, 100});
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.x_star, 2.0);
    EXPECT_EQ(r.final_x, (std::vector<double>{2, 2}));
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_EQ(r.slots, 2u);
}

TEST(Ftc, ConvergesOnRandomScenarios) {
    Stream s(2);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 3 + s.below(28);
        const auto g = random_strongly_connected(n, 0.05 + 0.3 * s.uniform(), s.split(trial));
        const auto r = run({g, random_states(n, s), Protocol::ftc, rayleigh_link(trial), 1e-9, 10000});
        ASSERT_TRUE(r.converged) << "trial " << trial;
        ASSERT_TRUE(r.monotone_bounded);
        ASSERT_EQ(r.slots, 2 * r.iterations);
    }
}

TEST(Ftc, MaximalSetGrowsAcrossLateWindows) {
    Stream s(8);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 4 + s.below(20);
        const auto g = random_strongly_connected(n, 0.05 + 0.2 * s.uniform(), s.split(trial));
        const auto x0 = random_states(n, s);
        const auto r = run({g, x0, Protocol::ftc, rayleigh_link(100 + trial), 1e-9, 10000});
        ASSERT_TRUE(r.converged);
        const auto& tr = r.trace;
        // k~: every initially non-maximal agent has had y = 0 at least once
        std::size_t k_tilde = 0;
        for (AgentId i = 0; i < n; ++i) {
            if (x0[i] == r.x_star) continue;
            std::size_t first = tr.size();
            for (std::size_t k = 0; k < tr.size(); ++k)
                if (!tr[k].y[i]) {
                    first = k;
                    break;
                }
            k_tilde = std::max(k_tilde, first);
        }
        for (std::size_t k = 2 * k_tilde; k < tr.size(); ++k) {
            const std::uint64_t t = tr[k].t_window;
            if (k != 2 * t || 2 * t + 2 >= tr.size()) continue;
            const std::size_t before = count_at(tr[t].x, r.x_star);
            const std::size_t after = count_at(tr[2 * t + 2].x, r.x_star);
            if (before < n) ASSERT_GT(after, before) << "trial " << trial << " k " << k;
        }
    }
}

TEST(Protocols, EquilibriumIsFixed) {
    Stream s(6);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + s.below(15);
        const auto g = random_strongly_connected(n, 0.3, s.split(trial));
        const double x_star = 10.0 * s.uniform();
        const auto link = rayleigh_link(trial);
        for (Protocol p : {Protocol::standard, Protocol::asymptotic, Protocol::ftc}) {
            auto st = ConsensusState::initial(std::vector<double>(n, x_star));
            for (int k = 0; k < 10; ++k) {
                ConsensusState next;
                if (p == Protocol::standard)
                    next = step_standard(g, st).next;
                else if (p == Protocol::asymptotic)
                    next = step_asymptotic(g, st, *link).next;
                else
                    next = step_ftc(g, st, *link).next;
                ASSERT_EQ(next.x, st.x);
                ASSERT_EQ(next.y, st.y);
                st = next;
            }
            const auto r = run({g, std::vector<double>(n, x_star), p, link, 1e-9, 10});
            EXPECT_TRUE(r.converged);
            EXPECT_EQ(r.iterations, 0u);
        }
    }
}

TEST(Protocols, NonEquilibriumStatesMove) {
    Stream s(61);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + s.below(10);
        const auto g = random_strongly_connected(n, 0.2, s.split(trial));
        ConsensusState st = ConsensusState::initial(random_states(n, s));
        for (std::size_t i = 0; i < n; ++i) st.y[i] = s.bernoulli(0.5);
        const double x_star = *std::max_element(st.x.begin(), st.x.end());
        const bool at_eq = std::all_of(st.x.begin(), st.x.end(), [&](double v) { return v == x_star; }) &&
                           std::all_of(st.y.begin(), st.y.end(), [](bool b) { return b; });
        if (at_eq) continue;
        const auto link = rayleigh_link(trial);
        const auto one = step_asymptotic(g, st, *link).next;
        const auto two = step_asymptotic(g, one, *link).next;
        ASSERT_TRUE(one.x != st.x || one.y != st.y || two.x != st.x || two.y != st.y) << trial;
    }
}

TEST(Protocols, LyapunovExamplesAndDecrease) {
    const std::vector<double> eq{4, 4};
    EXPECT_EQ(lyapunov_v(eq, eq, 4.0), 0.0);
    const std::vector<double> now{4, 3}, prev{4, 2};
    EXPECT_EQ(lyapunov_v(now, prev, 4.0), 3.0);
    EXPECT_THROW(lyapunov_v(now, prev, 3.5), InvalidArgument);

    Stream s(33);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 3 + s.below(15);
        const auto g = random_strongly_connected(n, 0.2, s.split(trial));
        const auto r = run({g, random_states(n, s), Protocol::asymptotic, rayleigh_link(trial), 1e-9, 3000});
        const auto& tr = r.trace;
        for (std::size_t k = 1; k < tr.size(); ++k) {
            ASSERT_LE(tr[k].v_lyapunov, tr[k - 1].v_lyapunov + 1e-12);
            if (!is_consensus(tr[k - 1].x, r.x_star, 1e-9)) ASSERT_GT(tr[k].v_lyapunov, 0.0);
        }
    }
}

TEST(Asymptotic, NonMaximalAgentsLoseAuthorization) {
    Stream s(71);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 3 + s.below(15);
        const auto g = random_strongly_connected(n, 0.2, s.split(trial));
        const auto x0 = random_states(n, s);
        const auto r = run({g, x0, Protocol::asymptotic, rayleigh_link(trial), 1e-9, 5000});
        const auto& tr = r.trace;
        for (std::size_t k0 = 0; k0 + 1 < tr.size(); k0 += 7) {
            for (AgentId i = 0; i < n; ++i) {
                // only agents that are non-maximal at k0 and still move afterwards
                if (tr[k0].x[i] == r.x_star || tr.back().x[i] == tr[k0].x[i]) continue;
                bool lost = false;
                for (std::size_t k = k0 + 1; k < tr.size() && !lost; ++k) lost = !tr[k].y[i];
                ASSERT_TRUE(lost) << "trial " << trial << " agent " << i << " k0 " << k0;
            }
        }
    }
}

TEST(Protocols, RunValidation) {
    const auto line = DirectedTopology(3, {{0, 1}, {1, 2}});
    EXPECT_THROW(run({line, {1, 2, 3}, Protocol::ftc, rayleigh_link(1), 1e-9, 10}), InvalidArgument);
    EXPECT_THROW(run({DirectedTopology::cycle(3), {1, 2}, Protocol::ftc, rayleigh_link(1), 1e-9, 10}), InvalidArgument);
    EXPECT_THROW(run({DirectedTopology::cycle(3), {1, 2, 3}, Protocol::ftc, nullptr, 1e-9, 10}), InvalidArgument);
    EXPECT_THROW(run({DirectedTopology::cycle(3), {1, 2, 3}, Protocol::ftc, rayleigh_link(1), 1e-9, 0}), InvalidArgument);
    EXPECT_EQ(protocol_from_string("ftc"), Protocol::ftc);
    EXPECT_FALSE(protocol_from_string("gossip").has_value());
}

TEST(Protocols, DuplicateMaximaConverge) {
    const auto g = DirectedTopology::cycle(6);
    for (Protocol p : {Protocol::standard, Protocol::asymptotic, Protocol::ftc}) {
        const auto r = run({g, {7, 1, 7, 2, 3, 7}, p, rayleigh_link(9), 1e-9, 10000});
        EXPECT_TRUE(r.converged) << to_string(p);
        EXPECT_EQ(r.x_star, 7.0);
    }
}
