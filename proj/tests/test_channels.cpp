#include <gtest/gtest.h>

#include "rmnest/channels.hpp"

using namespace rmnest;

namespace {

// I(X;Y) for uniform X, summed directly over output symbols
double direct_mi(const channel_model& ch) {
    double mi = 0;
    for (const auto& s : ch.symbols()) {
        double a = ch.prob(s.value), b = ch.prob(-s.value);
        if (a <= 0) continue;
        mi += 0.5 * a * std::log2(a / (0.5 * (a + b)));
    }
    // the x = -1 half mirrors the x = +1 half
    return 2 * mi;
}

}  // namespace

TEST(Channels, CapacityExamples) {
    EXPECT_DOUBLE_EQ(channel_model::bsc(0).capacity(), 1.0);
    EXPECT_DOUBLE_EQ(channel_model::bec(0.5).capacity(), 0.5);
    EXPECT_NEAR(channel_model::bsc(0.11).capacity(), 0.5001, 1e-4);
    EXPECT_NEAR(channel_model::bsc(0.11).capacity(), 1 - h2(0.11), 1e-15);
}

TEST(Channels, CapacityMatchesDirectSum) {
    for (double p : {0.01, 0.1, 0.3, 0.5}) {
        EXPECT_NEAR(direct_mi(channel_model::bsc(p)), 1 - h2(p), 1e-12);
        EXPECT_NEAR(direct_mi(channel_model::bec(p)), 1 - p, 1e-12);
    }
    auto bms = channel_model::discrete_bms({{1, 0.6}, {-1, 0.1}, {0.5, 0.2}, {-0.5, 0.05}, {0, 0.05}});
    EXPECT_NEAR(bms.capacity(), direct_mi(bms), 1e-12);
}

TEST(Channels, Errors) {
    EXPECT_THROW(channel_model::bsc(1.2), parameter_error);
    EXPECT_THROW(channel_model::bec(-0.1), parameter_error);
    EXPECT_THROW(channel_model::discrete_bms({{1, 0.5}, {0.5, 0.5}}), symmetry_error);
    EXPECT_THROW(channel_model::discrete_bms({{1, 0.5}, {-1, 0.2}}), parameter_error);
    EXPECT_THROW(make_channel("bsc"), parameter_error);
    EXPECT_THROW(make_channel("awgn 0.1"), parameter_error);
    EXPECT_THROW(make_channel("bsc abc"), parameter_error);
}

TEST(Channels, ParseAndDescribe) {
    EXPECT_EQ(make_channel("bsc 0.1").describe(), "bsc 0.1");
    EXPECT_EQ(make_channel("bec 0.3").describe(), "bec 0.3");
    auto b = make_channel("bms 1:0.7,-1:0.1,0:0.2");
    EXPECT_EQ(b.kind(), channel_kind::bms);
    EXPECT_NEAR(b.capacity(), make_channel(b.describe()).capacity(), 1e-15);
}

TEST(ErasureCascade, Examples) {
    auto ch = channel_model::bsc(0.2);
    auto same = erasure_cascade(ch, 0);
    EXPECT_NEAR(same.capacity(), ch.capacity(), 1e-15);
    for (const auto& s : ch.symbols()) EXPECT_DOUBLE_EQ(same.prob(s.value), s.prob);
    EXPECT_NEAR(erasure_cascade(ch, 1).capacity(), 0, 1e-15);
    EXPECT_THROW(erasure_cascade(ch, 1.5), parameter_error);
    for (double p : {0.05, 0.2, 0.4})
        for (double t : {0.1, 0.5, 0.9}) {
            auto c = erasure_cascade(channel_model::bsc(p), t);
            EXPECT_NEAR(c.capacity(), (1 - t) * (1 - h2(p)), 1e-12);
            EXPECT_NEAR(direct_mi(c), (1 - t) * (1 - h2(p)), 1e-12);
        }
}

TEST(SampleNoise, Examples) {
    counter_rng rng(1, 0);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(channel_model::bsc(0).sample_noise(rng), 1.0);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(channel_model::bec(1).sample_noise(rng), 0.0);
    const int n = 1000000;
    int flips = 0;
    auto ch = channel_model::bsc(0.3);
    counter_rng r2(42, 0);
    for (int i = 0; i < n; ++i) flips += ch.sample_noise(r2) < 0;
    double sigma = std::sqrt(n * 0.3 * 0.7);
    EXPECT_LE(std::abs(flips - 0.3 * n), 3 * sigma);
}

TEST(Rng, CounterStreamsAreReproducible) {
    counter_rng a(9, 17), b(9, 17), c(9, 18);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        auto x = a(), y = b(), z = c();
        EXPECT_EQ(x, y);
        differs = differs || x != z;
    }
    EXPECT_TRUE(differs);
}
