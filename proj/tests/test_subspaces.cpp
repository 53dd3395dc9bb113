#include <gtest/gtest.h>

#include <map>
#include <set>

#include "rmnest/codes.hpp"
#include "rmnest/subspaces.hpp"

using namespace rmnest;

namespace {

// number of d-dim subspaces of F_2^m by enumerating distinct spans
std::size_t count_subspaces(unsigned m, unsigned d) {
    std::set<std::vector<std::uint64_t>> seen;
    std::uint64_t n = 1ULL << m;
    std::vector<std::uint64_t> pick(d);
    std::function<void(unsigned, std::uint64_t)> rec = [&](unsigned i, std::uint64_t start) {
        if (i == d) {
            if (rank_words(pick) != static_cast<int>(d)) return;
            auto s = span_of(pick);
            std::sort(s.begin(), s.end());
            seen.insert(s);
            return;
        }
        for (std::uint64_t v = start; v < n; ++v) {
            pick[i] = v;
            rec(i + 1, v + 1);
        }
    };
    rec(0, 1);
    return seen.size();
}

}  // namespace

TEST(MultiLook, Examples) {
    auto f = multi_look_family(2, 2, 1);
    ASSERT_EQ(f.looks.size(), 2u);
    for (const auto& l : f.looks) EXPECT_EQ(l.size(), 2u);
    EXPECT_EQ(f.pairwise_overlap, rational(1, 2));

    auto g = multi_look_family(6, 3, 2);
    ASSERT_EQ(g.looks.size(), 3u);
    EXPECT_EQ(g.pairwise_overlap, rational(1, 4));
    for (const auto& l : g.looks) EXPECT_TRUE(codes_equal(project(rm_generator(1, 6), l), rm_generator(1, 2)));

    auto h = multi_look_family(4, 1, 2);
    ASSERT_EQ(h.looks.size(), 1u);
    EXPECT_EQ(h.looks[0].size(), 16u);
    EXPECT_THROW(multi_look_family(3, 2, 2), parameter_error);
}

TEST(MultiLook, LooksAreSubspacesWithPairwiseOverlap) {
    for (unsigned m = 2; m <= 7; ++m)
        for (unsigned s = 2; s <= m; ++s)
            for (unsigned t = 1; s * t <= m; ++t) {
                auto f = multi_look_family(m, s, t);
                for (std::size_t i = 0; i < f.looks.size(); ++i) {
                    // closed under xor and of dimension m - (s-1)t
                    std::set<std::size_t> pts(f.looks[i].begin(), f.looks[i].end());
                    EXPECT_EQ(pts.size(), std::size_t{1} << (m - (s - 1) * t));
                    for (auto a : pts)
                        for (auto b : pts) ASSERT_TRUE(pts.count(a ^ b));
                    for (std::size_t j = i + 1; j < f.looks.size(); ++j) {
                        std::size_t common = 0;
                        for (auto x : f.looks[j]) common += pts.count(x);
                        EXPECT_EQ(common << t, pts.size());
                    }
                }
            }
}

TEST(Spread, Examples) {
    auto whole = spread_family(3, 1);
    EXPECT_EQ(whole.count, 1u);
    auto s22 = spread_family(2, 2);
    EXPECT_EQ(s22.count, 5u);
    auto s13 = spread_family(1, 3);
    EXPECT_EQ(s13.count, 7u);
    std::set<std::uint64_t> lines;
    for (const auto& b : s13.subspaces) lines.insert(b.at(0));
    EXPECT_EQ(lines.size(), 7u);
    EXPECT_THROW(spread_family(3, 6), feasibility_error);
}

TEST(Spread, PartitionsNonzeroVectors) {
    for (unsigned s = 1; s <= 8; ++s)
        for (unsigned t = 1; s * t <= 12; ++t) {
            auto sp = spread_family(s, t);
            std::vector<int> hits(1ULL << (s * t), 0);
            for (const auto& b : sp.subspaces) {
                EXPECT_EQ(set_dim(b), static_cast<int>(s));
                for (auto v : span_of(b)) ++hits[v];
            }
            for (std::size_t v = 1; v < hits.size(); ++v) ASSERT_EQ(hits[v], 1) << s << " " << t;
        }
}

TEST(GaussianBinomial, Examples) {
    for (unsigned m = 0; m <= 6; ++m) EXPECT_EQ(gaussian_binomial(m, 0), 1);
    EXPECT_EQ(gaussian_binomial(3, 1), 7);
    EXPECT_EQ(gaussian_binomial(4, 2), 35);
    EXPECT_EQ(gaussian_binomial(3, 4), 0);
}

TEST(GaussianBinomial, MatchesEnumeration) {
    for (unsigned m = 1; m <= 4; ++m)
        for (unsigned d = 1; d <= m; ++d) EXPECT_EQ(gaussian_binomial(m, d), big_int(count_subspaces(m, d))) << m << " " << d;
}

TEST(SetDim, Examples) {
    EXPECT_EQ(set_dim(std::vector<std::uint64_t>{}), 0);
    EXPECT_EQ(set_dim(std::vector<std::uint64_t>{1}), 1);
    EXPECT_EQ(set_dim(std::vector<bit_vec>{bit_vec::from_string("110"), bit_vec::from_string("101")}), 2);
}

TEST(SampleGl, Examples) {
    counter_rng rng(1, 0);
    for (int i = 0; i < 10; ++i) {
        auto g = sample_gl(1, rng);
        EXPECT_EQ(g.apply(1), 1u);
    }
    auto id = make_invertible_map(3, {1, 2, 4});
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(id.induced_perm[i], i);
    EXPECT_THROW(make_invertible_map(2, {1, 1}), parameter_error);
}

TEST(SampleGl, UniformOnGl22) {
    EXPECT_EQ(enumerate_gl(2).size(), 6u);
    EXPECT_EQ(enumerate_gl(3).size(), 168u);
    EXPECT_EQ(enumerate_gl(4).size(), 20160u);
    std::map<std::vector<std::size_t>, int> freq;
    const int draws = 60000;
    for (int i = 0; i < draws; ++i) {
        counter_rng rng(2024, static_cast<std::uint64_t>(i));
        freq[sample_gl(2, rng).induced_perm]++;
    }
    ASSERT_EQ(freq.size(), 6u);
    double mean = draws / 6.0, sigma = std::sqrt(draws * (1.0 / 6) * (5.0 / 6));
    for (const auto& [k, c] : freq) EXPECT_LE(std::abs(c - mean), 3 * sigma);
}

TEST(SampleGl, InducedPermutationIsLinear) {
    counter_rng rng(5, 0);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = sample_gl(5, rng);
        EXPECT_EQ(g.induced_perm[0], 0u);
        for (std::size_t a = 0; a < 32; ++a)
            for (std::size_t b = 0; b < 32; ++b) ASSERT_EQ(g.induced_perm[a ^ b], g.induced_perm[a] ^ g.induced_perm[b]);
    }
}
