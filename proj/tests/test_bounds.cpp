#include <gtest/gtest.h>

#include "rmnest/bounds.hpp"

using namespace rmnest;

namespace {

// cumulative binomial(m, .)/2^m via the halving recurrence, no big integers
std::vector<double> rate_row(unsigned m) {
    std::vector<double> row{1.0};
    for (unsigned j = 0; j < m; ++j) {
        std::vector<double> next(row.size() + 1, 0.0);
        for (std::size_t i = 0; i < row.size(); ++i) {
            next[i] += row[i] / 2;
            next[i + 1] += row[i] / 2;
        }
        row = next;
    }
    for (std::size_t i = 1; i < row.size(); ++i) row[i] += row[i - 1];
    return row;
}

}  // namespace

TEST(RatePhi, SpotValues) {
    auto r = rate_phi_bound(8, 16);
    EXPECT_NEAR(r.rate_value, 0.5 + 0.5 * 12870.0 / 65536.0, 1e-15);
    EXPECT_NEAR(r.phi, 0.5, 1e-15);
    EXPECT_NEAR(r.gap, 0.09819, 1e-5);
    EXPECT_NEAR(r.gap_bound, 1 / std::sqrt(32 * pi), 1e-15);
    EXPECT_TRUE(r.holds);
    for (unsigned m = 1; m <= 40; ++m) {
        auto full = rate_phi_bound(m, m);
        EXPECT_EQ(full.rate, rational(1));
        EXPECT_TRUE(full.holds);
    }
    EXPECT_THROW(rate_phi_bound(5, 4), parameter_error);
    EXPECT_THROW(rate_phi_bound(0, 65), parameter_error);
}

TEST(RatePhi, RatesMatchRecurrenceAndBoundHolds) {
    for (unsigned m = 1; m <= 64; ++m) {
        auto row = rate_row(m);
        for (unsigned r = 0; r <= m; ++r) {
            auto rec = rate_phi_bound(r, m);
            ASSERT_NEAR(rec.rate_value, row[r], 1e-13);
            ASSERT_TRUE(rec.holds) << r << " " << m;
        }
    }
}

TEST(RatePhi, TelescopeChain) {
    for (unsigned m = 1; m <= 20; ++m)
        for (unsigned r = 0; r <= m; ++r)
            for (unsigned k = 0; k <= 10; ++k) ASSERT_TRUE(rate_telescope(r, m, k).holds) << r << " " << m << " " << k;
}

TEST(RatePhi, FloorChoice) {
    for (unsigned m = 4; m <= 200; m += 7)
        for (double target : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            auto fc = floor_choice_bound(target, m);
            EXPECT_TRUE(fc.holds) << m << " " << target;
        }
}

TEST(Recursions, Examples) {
    EXPECT_NEAR(bec_two_look(0.2, 0.5), 0.5 * 0.04 + 0.1, 1e-15);
    EXPECT_NEAR(bec_two_look(0.2, 0.0), 0.04, 1e-15);
    EXPECT_NEAR(bsc_three_look(0.1, 0.25), 3 * 0.25 * 0.1 + 3 * 0.75 * 0.01, 1e-15);
    EXPECT_NEAR(bec_odds(0.5, 0.5), 1 / 1.5, 1e-15);
    EXPECT_NEAR(odds(mmse_odds(0.5, 0.5)), 0.75, 1e-15);
    EXPECT_THROW(bec_two_look(0.2, 1.0), parameter_error);
    EXPECT_THROW(mmse_odds(1.0, 0.5), parameter_error);
}

TEST(Recursions, TwoLookNeverWorse) {
    for (double rho = 0; rho < 1; rho += 0.125)
        for (double pe = 0; pe <= 1; pe += 0.01) EXPECT_LE(bec_two_look(pe, rho), pe + 1e-15);
}

TEST(Recursions, OddsClosedForms) {
    for (double rho : {0.0, 0.25, 0.5, 0.75})
        for (double d : {0.3, 0.05}) {
            double o = (1 - d) / d, mm = 1 - d;
            for (unsigned k = 1; k <= 20; ++k) {
                o = bec_odds(from_odds(o), rho);
                mm = mmse_odds(mm, rho);
                EXPECT_NEAR(o / (std::pow(1 / (2 - rho), k) * (1 - d) / d), 1.0, 1e-12);
                EXPECT_NEAR(odds(mm) / (std::pow((1 + rho) / 2, k) * (1 - d) / d), 1.0, 1e-12);
            }
        }
}

TEST(LevelK, ClosedFormDominatesOnAlphaRelation) {
    for (double p : {0.1, 0.3, 0.5})
        for (double pe = 1e-6; pe < 0.5; pe *= 3) {
            if (!alpha_relation(pe, p).holds) continue;
            EXPECT_LE(level_k(pe, 1, p), level_k_closed(pe, 1, p) * (1 + 1e-12));
        }
    EXPECT_NEAR(level_k(0.01, 1, 0.5), 0.01 * (0.01 + 0.5 * std::pow(0.01, 1.0 / 6) + 1 / (level_k_constant(0.5) * std::log(100.0))),
                1e-15);
    EXPECT_NEAR(level_k_bsc(0.01, 2, 0.5), 3 * level_k(0.01, 2, 0.5), 1e-15);
    EXPECT_THROW(level_k_closed(0.1, 3, 0.5), parameter_error);
}

TEST(Traces, BecAndBms) {
    auto bec = theorem_trace(theorem_kind::bec, {1, 3, 0, 0, 0, 0, 1, 0.3, -1});
    EXPECT_EQ(bec.m, 9u);
    EXPECT_EQ(bec.k, 6u);
    ASSERT_EQ(bec.stages.size(), 7u);
    for (std::size_t i = 1; i < bec.stages.size(); ++i) EXPECT_NEAR(bec.stages[i].value / bec.stages[i - 1].value, 2.0 / 3.0, 1e-12);

    auto bms = theorem_trace(theorem_kind::bms, {1, 3, 0, 0, 0, 0, 1, 0.1, 0.5});
    EXPECT_NEAR(bms.closed_form, std::pow(0.75, 6) * std::sqrt(18 * pi), 1e-12);
    EXPECT_NEAR(bms.closed_form, 1.338, 1e-3);
    EXPECT_TRUE(bms.closed_form >= 1.0);
    for (std::size_t i = 1; i < bms.stages.size(); ++i) EXPECT_NEAR(bms.stages[i].value / bms.stages[i - 1].value, 0.75, 1e-12);
    EXPECT_THROW(parse_theorem("nope"), parameter_error);
    for (auto k : {theorem_kind::bec, theorem_kind::bms, theorem_kind::fast_bec, theorem_kind::fast_bsc, theorem_kind::corollary_bsc})
        EXPECT_EQ(parse_theorem(theorem_name(k)), k);
}

TEST(Traces, FastBscShape) {
    trace_params prm;
    prm.r = 3;
    prm.m = 8;
    prm.k = 16;
    prm.delta = 0.05;
    prm.eta = 0.5;
    auto tr = theorem_trace(theorem_kind::fast_bsc, prm);
    EXPECT_EQ(tr.stages.size(), 1u + 8 + 2);
    EXPECT_NEAR(tr.capacity, to_double(rm_rate_exact(3, 8)) + 0.05, 1e-15);
    prm.k = 12;
    EXPECT_THROW(theorem_trace(theorem_kind::fast_bsc, prm), parameter_error);
    trace_params c;
    c.s = 2;
    c.t = 6;
    EXPECT_THROW(theorem_trace(theorem_kind::corollary_bsc, c), parameter_error);
}

TEST(ListBall, Examples) {
    auto z = list_ball_bound(0);
    EXPECT_EQ(z.radius, 0);
    EXPECT_EQ(z.prob_bound, 0);
    auto o = list_ball_bound(1);
    EXPECT_EQ(o.radius, 1);
    EXPECT_EQ(o.prob_bound, 1);
}

TEST(Transfer, Examples) {
    EXPECT_EQ(transfer_alpha(100, 0.2, 0.2), 0.0);
    EXPECT_NEAR(transfer_alpha(100, 0.1, 0.05), 10 * (std::sqrt(-std::log(0.9)) - std::sqrt(-std::log(0.95))), 1e-15);
    EXPECT_NEAR(transfer_alpha(100, 0.1, 0.05), 0.981, 1e-3);
    double n = 1024;
    EXPECT_NEAR(transfer_width(1e4, 1 / (n * n)), 4 * std::sqrt(2 * std::log(2.0)) * std::sqrt(2 * std::log(n) / 1e4), 1e-15);
    EXPECT_NEAR(transfer_width(1e4, 1 / (n * n)), 0.1755, 5e-4);  // 0.17535...
    auto rec = tz_sasoglu_transfer({1024, 100, 0.2, 0.25, 0}, 1 / (n * n));
    EXPECT_NEAR(rec.kappa, std::sqrt(100 / std::log(1024.0)), 1e-12);
    EXPECT_NEAR(rec.bms_block_stated, 2 / (n * n), 1e-18);
    EXPECT_TRUE(rec.simplified_valid);
    EXPECT_THROW(tz_sasoglu_transfer({1024, 100, 0.7, 0.25, 0}, 0.01), parameter_error);
}

TEST(Gauss, InverseRoundTrip) {
    for (double u = 0.01; u < 1; u += 0.01) EXPECT_NEAR(gauss_cdf(gauss_cdf_inv(u)), u, 1e-13);
    EXPECT_NEAR(gauss_cdf(0), 0.5, 1e-16);
}
