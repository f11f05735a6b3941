#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "airmax/airlink.hpp"
#include "airmax/error.hpp"

using namespace airmax;

namespace {

// Direct convex-combination oracle: sum_j (xi_j / sum xi) x_j.
double weighted_oracle(std::span<const Signal> states, const CoefficientDraw& draw) {
    long double num = 0, den = 0;
    for (std::size_t k = 0; k < states.size(); ++k) {
        num += static_cast<long double>(draw.values[k].gain) * states[k].value;
        den += draw.values[k].gain;
    }
    return static_cast<double>(num / den);
}

struct RandomRound {
    std::vector<Signal> states;
    CoefficientDraw draw;
};

RandomRound random_round(const SignalRanges& r, const ChannelModel& model, Stream& s, std::size_t max_n) {
    RandomRound out;
    const std::size_t n = 1 + s.below(max_n);
    std::vector<AgentId> tx(n);
    for (std::size_t k = 0; k < n; ++k) {
        tx[k] = k;
        out.states.push_back({k, std::min(r.s_max(), r.s_min() + (r.s_max() - r.s_min()) * s.uniform())});
    }
    out.draw = draw_coefficients(model, 0, tx, s.split(s()));
    return out;
}

}  // namespace

TEST(Airlink, ScaleAndPilotExamples) {
    const auto r = SignalRanges::defaults();
    EXPECT_DOUBLE_EQ(r.alpha(), 0.4);
    EXPECT_DOUBLE_EQ(r.beta(), 1.0);
    EXPECT_DOUBLE_EQ(scale(r, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(scale(r, 10.0), 5.0);
    EXPECT_DOUBLE_EQ(scale(r, 5.0), 3.0);
    EXPECT_DOUBLE_EQ(pilot(r), 1.4);
    EXPECT_DOUBLE_EQ(pilot(SignalRanges(0, 1, 0, 1)), 1.0);
    EXPECT_THROW((void)scale(r, 10.5), InvalidArgument);
    EXPECT_THROW((void)scale(r, -0.1), InvalidArgument);
}

TEST(Airlink, RangesValidation) {
    EXPECT_THROW(SignalRanges(1, 1, 0, 1), InvalidArgument);
    EXPECT_THROW(SignalRanges(0, 1, -1, 1), InvalidArgument);
    EXPECT_THROW(SignalRanges(0, 1, 2, 1), InvalidArgument);
}

TEST(Airlink, ReceiveExamples) {
    const auto r = SignalRanges::defaults();
    const Signal one[] = {{4, 3.7}};
    CoefficientDraw d1;
    d1.values = {{4, 0.123}};
    EXPECT_NEAR(receive_round(r, one, d1), 3.7, 1e-12);

    const Signal two[] = {{1, 3.0}, {2, 4.0}};
    CoefficientDraw d2;
    d2.values = {{1, 1.0}, {2, 1.0}};
    EXPECT_NEAR(receive_round(r, two, d2), 3.5, 1e-12);
    EXPECT_NEAR(receive_round(r, two, d2), weighted_oracle(two, d2), 1e-12);
}

TEST(Airlink, MatchesConvexCombinationOracle) {
    Stream s(101);
    const ChannelModel models[] = {ChannelModel::rayleigh(1.0), ChannelModel::rician(2.0, 1.0),
                                   ChannelModel::constant(3.0)};
    for (int trial = 0; trial < 5000; ++trial) {
        const double lo = s.uniform() * 5, hi = lo + 0.5 + s.uniform() * 20;
        const double plo = s.uniform() * 2, phi = plo + 0.1 + s.uniform() * 10;
        const SignalRanges r(lo, hi, plo, phi);
        const auto round = random_round(r, models[trial % 3], s, 60);
        const double u = receive_round(r, round.states, round.draw);
        ASSERT_NEAR(u, weighted_oracle(round.states, round.draw), 1e-10);

        double mn = round.states[0].value, mx = mn;
        for (const auto& st : round.states) {
            mn = std::min(mn, st.value);
            mx = std::max(mx, st.value);
        }
        ASSERT_GE(u, mn - 1e-12);
        ASSERT_LE(u, mx + 1e-12);
    }
}

TEST(Airlink, EqualStatesComeBackUnchanged) {
    Stream s(8);
    const auto r = SignalRanges::defaults();
    for (int trial = 0; trial < 500; ++trial) {
        auto round = random_round(r, ChannelModel::rayleigh(1.0), s, 30);
        const double c = 10.0 * s.uniform();
        for (auto& st : round.states) st.value = c;
        ASSERT_NEAR(receive_round(r, round.states, round.draw), c, 1e-12);
    }
}

TEST(Airlink, PowerRangeDoesNotChangeTheResult) {
    Stream s(55);
    for (int trial = 0; trial < 1000; ++trial) {
        const SignalRanges base(0, 10, 1, 5);
        const auto round = random_round(base, ChannelModel::rayleigh(1.0), s, 20);
        const double plo = s.uniform() * 3, phi = plo + 0.01 + s.uniform() * 50;
        const SignalRanges other(0, 10, plo, phi);
        ASSERT_NEAR(receive_round(base, round.states, round.draw),
                    receive_round(other, round.states, round.draw), 1e-9);
    }
}

TEST(Airlink, DescaleInvertsTheAffineMap) {
    const auto r = SignalRanges::defaults();
    // Single transmitter with gain g: r = g(alpha x + beta), r' = g(alpha + beta).
    const Wide g = 0.37, x = 6.25;
    const Wide rx = g * (Wide(0.4) * x + 1), rp = g * Wide(1.4);
    // Psi = sum xi x; dividing by the gain recovers the state
    EXPECT_NEAR(static_cast<double>(descale(r, rx, rp)), 0.37 * 6.25, 1e-15);
    EXPECT_NEAR(static_cast<double>(descale(r, rx, rp) / g), 6.25, 1e-15);
}
