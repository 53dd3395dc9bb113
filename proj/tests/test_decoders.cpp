#include <gtest/gtest.h>

#include <set>

#include "rmnest/decoders.hpp"

using namespace rmnest;

namespace {

// unrecoverable-pattern counts by rank tests on every erasure pattern
std::vector<std::uint64_t> brute_unrecoverable(const binary_code& c, std::size_t target) {
    std::size_t n = c.length();
    auto cols = generator_columns(c.rows(), n);
    std::vector<std::uint64_t> counts(n, 0);
    for (std::uint64_t e = 0; e < (1ULL << n); ++e) {
        if ((e >> target) & 1U) continue;
        std::vector<std::uint64_t> seen;
        for (std::size_t j = 0; j < n; ++j)
            if (j != target && !((e >> j) & 1U)) seen.push_back(cols[j]);
        int r = rank_words(seen);
        seen.push_back(cols[target]);
        if (rank_words(seen) != r) ++counts[static_cast<std::size_t>(std::popcount(e))];
    }
    return counts;
}

// P(c_target = 1 | received others) by summing over codewords
double posterior_one(const binary_code& c, double p, std::uint64_t y, std::size_t target) {
    std::size_t n = c.length();
    double num = 0, den = 0;
    for (auto cw : codewords(c)) {
        std::uint64_t diff = (cw ^ y) & ~(1ULL << target) & ((1ULL << n) - 1);
        auto d = std::popcount(diff);
        double w = std::pow(p, d) * std::pow(1 - p, static_cast<double>(n - 1) - d);
        den += w;
        if ((cw >> target) & 1U) num += w;
    }
    return num / den;
}

std::vector<binary_code> small_codes() {
    return {repetition_code(3), repetition_code(5), spc_code(3), spc_code(5), rm_generator(1, 3), rm_generator(1, 4),
            rm_generator(2, 4), binary_code(6, {bit_vec::from_string("110100"), bit_vec::from_string("011010"),
                                               bit_vec::from_string("101001")})};
}

}  // namespace

TEST(BecRecoverable, Examples) {
    auto rep = repetition_code(3);
    EXPECT_FALSE(bec_recoverable(rep, bit_vec::from_string("011"), 0));
    EXPECT_TRUE(bec_recoverable(rep, bit_vec::from_string("010"), 0));
    auto spc = spc_code(3);
    for (const char* pat : {"000", "010", "001", "011"}) {
        bool both_seen = std::string(pat) == "000";
        EXPECT_EQ(bec_recoverable(spc, bit_vec::from_string(pat), 0), both_seen) << pat;
    }
    EXPECT_THROW(bec_recoverable(rep, bit_vec::from_string("000"), 3), parameter_error);
}

TEST(BecExact, CountsMatchBruteForce) {
    for (const auto& c : small_codes())
        for (std::size_t t : {std::size_t{0}, c.length() - 1}) EXPECT_EQ(bec_unrecoverable_counts(c, t), brute_unrecoverable(c, t));
}

TEST(BecExact, RepetitionClosedForm) {
    for (double p : {0.1, 0.5, 0.9}) {
        EXPECT_NEAR(bec_exact_pe(repetition_code(3), 0, p), p * p, 1e-15);
        EXPECT_NEAR(bec_exact_pe(spc_code(4), 0, p), 1 - std::pow(1 - p, 3), 1e-15);
    }
}

TEST(SyndromeTable, Examples) {
    auto full = build_syndrome_table(rm_generator(3, 3));
    ASSERT_EQ(full.leaders.size(), 1u);
    EXPECT_EQ(full.leaders[0], 0u);

    auto rep = build_syndrome_table(repetition_code(3));
    ASSERT_EQ(rep.leaders.size(), 4u);
    std::set<std::uint64_t> leaders(rep.leaders.begin(), rep.leaders.end());
    EXPECT_EQ(leaders, (std::set<std::uint64_t>{0, 1, 2, 4}));
    EXPECT_EQ(rep.leaders[rep.syndrome(0b110)], 0b001u);  // 011 -> 100

    auto spc = build_syndrome_table(spc_code(3));
    ASSERT_EQ(spc.leaders.size(), 2u);
    std::set<std::uint64_t> sl(spc.leaders.begin(), spc.leaders.end());
    EXPECT_EQ(sl, (std::set<std::uint64_t>{0, 0b100}));  // 000 and 001
}

TEST(SyndromeTable, LeadersAreMinimalAndFirst) {
    for (const auto& c : small_codes()) {
        auto t = build_syndrome_table(c);
        std::size_t n = c.length();
        auto cws = codewords(c);
        for (std::uint64_t y = 0; y < (1ULL << n); ++y) {
            auto lead = t.leaders[t.syndrome(y)];
            // leader lies in the coset of y
            ASSERT_TRUE(c.contains(bit_vec::from_word(n, lead ^ y)));
            for (auto cw : cws) ASSERT_LE(std::popcount(lead), std::popcount(y ^ cw));
        }
    }
}

TEST(BscDecoder, Examples) {
    bsc_extrinsic_decoder rep(repetition_code(3), 0, 0.1);
    EXPECT_EQ(rep.decode(bit_vec::from_string("011")), 1);
    int first = rep.decode(bit_vec::from_string("001"));
    for (int i = 0; i < 5; ++i) EXPECT_EQ(rep.decode(bit_vec::from_string("001")), first);
    EXPECT_THROW(bsc_extrinsic_decoder(repetition_code(3), 0, 0.5), parameter_error);
}

TEST(BscDecoder, SpcIsXorOfOthers) {
    for (std::size_t n = 2; n <= 6; ++n)
        for (double p : {0.05, 0.2, 0.4}) {
            bsc_extrinsic_decoder dec(spc_code(n), 0, p);
            for (std::uint64_t y = 0; y < (1ULL << n); ++y) {
                int x = std::popcount(y >> 1) & 1;
                ASSERT_EQ(dec.decode_word(y), x);
                double post = posterior_one(spc_code(n), p, y, 0);
                ASSERT_EQ(post > 0.5, x == 1);
            }
        }
}

TEST(BscDecoder, MatchesPosteriorEnumeration) {
    for (const auto& c : small_codes())
        for (double p : {0.05, 0.2, 0.4})
            for (std::size_t t : {std::size_t{0}, c.length() / 2}) {
                bsc_extrinsic_decoder dec(c, t, p);
                // every word up to length 8, a random sample beyond
                bool full = c.length() <= 8;
                std::uint64_t count = full ? (1ULL << c.length()) : 2000;
                counter_rng rng(17, c.length());
                for (std::uint64_t i = 0; i < count; ++i) {
                    std::uint64_t y = full ? i : rng.below(1ULL << c.length());
                    double post = posterior_one(c, p, y, t);
                    int d = dec.decode_word(y);
                    // exact ties follow the coset leader and are not compared
                    if (std::abs(post - 0.5) < 1e-12) continue;
                    ASSERT_EQ(d, post > 0.5 ? 1 : 0);
                    ASSERT_EQ(d, bsc_bitmap_by_likelihood(c, p, y, t));
                }
            }
}

TEST(ConditionalMean, Examples) {
    auto rep = repetition_code(3);
    auto ch = channel_model::bsc(0.1);
    EXPECT_NEAR(bms_conditional_mean(rep, ch, {0, 1, 1}, 0), 0.8 / 0.82, 1e-12);
    EXPECT_NEAR(bms_conditional_mean(rep, ch, {0, 1, -1}, 0), 0.0, 1e-15);
    auto bec = channel_model::bec(0.3);
    EXPECT_EQ(bms_conditional_mean(rm_generator(1, 3), bec, std::vector<double>(8, 0.0), 2), 0.0);
}

TEST(Metrics, RepetitionClosedForms) {
    double p = 0.1;
    auto m = extrinsic_metrics_exact(repetition_code(3), channel_model::bsc(p), 0);
    double q = 1 - 2 * p + 2 * p * p;
    EXPECT_NEAR(m.mmse, 1 - (1 - 2 * p) * (1 - 2 * p) / q, 1e-12);
    EXPECT_NEAR(m.mmse, 0.21951, 1e-5);
    auto b = extrinsic_metrics_exact(repetition_code(3), channel_model::bec(0.5), 0);
    ASSERT_TRUE(b.pe.has_value());
    EXPECT_NEAR(*b.pe, 0.25, 1e-15);
    EXPECT_NEAR(b.mmse, 0.25, 1e-15);
    EXPECT_NEAR(b.ber, 0.125, 1e-15);
}

TEST(Metrics, ChainHoldsEverywhere) {
    for (const auto& c : small_codes())
        for (double p : {0.02, 0.1, 0.25, 0.4})
            for (auto ch : {channel_model::bec(p), channel_model::bsc(p),
                            channel_model::discrete_bms({{1, 0.9 - p}, {-1, p / 2}, {0.4, 0.1}, {-0.4, p / 2}})}) {
                if (ch.kind() == channel_kind::bms && c.length() > 8) continue;
                auto m = extrinsic_metrics_exact(c, ch, 0);
                EXPECT_LE(2 * m.ber, m.mmse + 1e-12);
                EXPECT_LE(m.mmse, m.cond_entropy + 1e-12);
                EXPECT_LE(m.cond_entropy, 1.0 + 1e-12);
            }
}

TEST(Metrics, MonteCarloAgreesWithExact) {
    auto c = rm_generator(1, 4);
    auto ch = channel_model::bsc(0.05);
    auto ex = extrinsic_metrics_exact(c, ch, 0);
    auto mc = extrinsic_metrics_mc(c, ch, 0, {200000, 7, 1});
    EXPECT_LE(std::abs(mc.mmse - ex.mmse), 3 * mc.mmse_se + 1e-12);
    EXPECT_LE(std::abs(mc.pb - ex.pb), 3 * mc.pb_se + 1e-12);
    EXPECT_LE(std::abs(mc.cond_entropy - ex.cond_entropy), 3 * mc.cond_entropy_se + 1e-12);

    auto bec = extrinsic_metrics_mc(repetition_code(3), channel_model::bec(0.5), 0, {1000000, 3, 1});
    ASSERT_TRUE(bec.pe.has_value());
    EXPECT_LE(std::abs(*bec.pe - 0.25), 3 * bec.pe_se);
}

TEST(Metrics, MonteCarloIndependentOfWorkers) {
    auto c = rm_generator(1, 3);
    auto ch = channel_model::bsc(0.1);
    auto a = extrinsic_metrics_mc(c, ch, 0, {30000, 5, 1});
    auto b = extrinsic_metrics_mc(c, ch, 0, {30000, 5, 4});
    EXPECT_EQ(a.mmse, b.mmse);
    EXPECT_EQ(a.pb, b.pb);
    EXPECT_EQ(a.cond_entropy, b.cond_entropy);
}

TEST(Majority, TruthTable) {
    EXPECT_EQ(majority3(1, 1, 0), 1);
    EXPECT_EQ(majority3(0, 0, 0), 0);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) EXPECT_TRUE(majority_union_holds(a, b, c));
}

TEST(MultiLook, NoiselessAndAgreement) {
    auto code = rm_generator(1, 6);
    auto fam = multi_look_family(6, 3, 2);
    multi_look_decoder dec(code, fam, channel_model::bsc(0.05));
    auto cws = codewords(code);
    for (auto cw : cws) EXPECT_EQ(dec.decode(cw), static_cast<int>(cw & 1U));
    auto d = dec.look_decisions(0);
    EXPECT_EQ(d, (std::array<int, 3>{0, 0, 0}));
    // looks of different codes are rejected
    auto bad = fam;
    bad.looks[1] = {0, 1, 2, 5};
    EXPECT_THROW(multi_look_decoder(code, bad, channel_model::bsc(0.05)), structure_error);
}
