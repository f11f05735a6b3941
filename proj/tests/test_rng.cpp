#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "airmax/rng.hpp"

using airmax::Stream;

TEST(Rng, SamePositionSameValue) {
    Stream a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
    EXPECT_EQ(Stream(42).at(7), Stream(42).at(7));
}

TEST(Rng, SplitStreamsDiffer) {
    Stream root(1);
    EXPECT_NE(root.split(1).at(0), root.split(2).at(0));
    EXPECT_NE(root.split("x0").at(0), root.split("topology").at(0));
    EXPECT_EQ(root.split("x0").at(3), root.split("x0").at(3));
}

TEST(Rng, UniformOpenStaysInside) {
    Stream s(9);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.uniform_open();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Rng, BelowCoversRange) {
    Stream s(3);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto v = s.below(7);
        ASSERT_LT(v, 7u);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 7u);
}

TEST(Rng, NormalMoments) {
    Stream s(5);
    const int n = 200000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        const double z = s.normal();
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n;
    EXPECT_NEAR(mean, 0.0, 4.0 / std::sqrt(n));
    EXPECT_NEAR(sq / n - mean * mean, 1.0, 0.02);
}
