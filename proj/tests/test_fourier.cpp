#include <gtest/gtest.h>

#include "rmnest/fourier.hpp"
#include "rmnest/harness.hpp"

using namespace rmnest;

namespace {

boolean_fn random_fn(unsigned n, double p, std::uint64_t seed, bool indicator = false) {
    counter_rng rng(seed, n);
    std::vector<double> v(std::size_t{1} << n);
    for (auto& x : v) x = indicator ? (rng.bernoulli(0.3) ? 1.0 : 0.0) : 2 * rng.uniform() - 1;
    return boolean_fn(n, v, p);
}

// direct O(4^n) transform
std::vector<double> naive_transform(const boolean_fn& f) {
    double r0 = std::sqrt(f.p / (1 - f.p)), r1 = -std::sqrt((1 - f.p) / f.p);
    std::size_t size = f.values.size();
    std::vector<double> c(size, 0.0);
    for (std::size_t s = 0; s < size; ++s)
        for (std::size_t x = 0; x < size; ++x) {
            double mu = 1, chi = 1;
            for (unsigned i = 0; i < f.n; ++i) {
                bool xi = (x >> i) & 1U;
                mu *= xi ? f.p : 1 - f.p;
                if ((s >> i) & 1U) chi *= xi ? r1 : r0;
            }
            c[s] += mu * f.values[x] * chi;
        }
    return c;
}

boolean_fn majority3_fn(double p) { return boolean_fn(3, {0, 0, 0, 1, 0, 1, 1, 1}, p); }

double binom_d(unsigned n, unsigned k) { return static_cast<double>(binomial(n, k)); }

}  // namespace

TEST(Transform, Examples) {
    auto one = biased_transform(boolean_fn(3, std::vector<double>(8, 1.0), 0.3));
    EXPECT_NEAR(one.coeffs[0], 1.0, 1e-15);
    for (std::size_t s = 1; s < 8; ++s) EXPECT_NEAR(one.coeffs[s], 0.0, 1e-15);
    auto dict = biased_transform(boolean_fn(1, {0, 1}, 0.5));
    EXPECT_NEAR(dict.coeffs[0], 0.5, 1e-15);
    EXPECT_NEAR(dict.coeffs[1], -0.5, 1e-15);
    EXPECT_NEAR(level_profile(dict).variance, 0.25, 1e-15);
    EXPECT_THROW(boolean_fn(25, {}, 0.5), feasibility_error);
    EXPECT_THROW(boolean_fn(2, {0, 1, 0, 1}, 1.0), parameter_error);
}

TEST(Transform, MatchesNaiveOracle) {
    auto f = random_fn(10, 0.3, 1);
    auto fast = biased_transform(f).coeffs;
    auto slow = naive_transform(f);
    for (std::size_t s = 0; s < fast.size(); ++s) ASSERT_NEAR(fast[s], slow[s], 1e-10);
}

TEST(Transform, InverseAndParseval) {
    for (double p : {0.1, 0.5, 0.8}) {
        auto f = random_fn(9, p, 2);
        auto s = biased_transform(f);
        auto back = inverse_transform(s);
        for (std::size_t x = 0; x < f.values.size(); ++x) ASSERT_NEAR(back.values[x], f.values[x], 1e-12);
        double sq = 0;
        for (double c : s.coeffs) sq += c * c;
        EXPECT_NEAR(sq, second_moment(f), 1e-12);
        EXPECT_NEAR(s.coeffs[0], expectation(f), 1e-12);
        auto lp = level_profile(s);
        EXPECT_NEAR(lp.total, sq, 1e-12);
        EXPECT_NEAR(lp.variance, sq - s.coeffs[0] * s.coeffs[0], 1e-12);
    }
}

TEST(Restriction, Examples) {
    auto f = random_fn(6, 0.4, 3);
    auto s = biased_transform(f);
    auto full = restrict_spectrum(f, 0x3f);
    for (std::size_t k = 0; k < s.coeffs.size(); ++k) EXPECT_NEAR(full.coeffs[k], s.coeffs[k], 1e-12);
    auto none = restrict_spectrum(f, 0);
    EXPECT_NEAR(none.coeffs[0], s.coeffs[0], 1e-12);
    for (std::size_t k = 1; k < s.coeffs.size(); ++k) EXPECT_NEAR(none.coeffs[k], 0.0, 1e-12);
}

TEST(Restriction, MatchesConditionalExpectation) {
    const double p = 0.4;
    auto f = random_fn(6, p, 4);
    std::uint64_t a = 0b000101;
    // average over the completions outside A weighted by the product measure
    std::vector<double> g(64, 0.0);
    for (std::uint64_t x = 0; x < 64; ++x)
        for (std::uint64_t z = 0; z < 64; ++z) {
            if (z & a) continue;
            std::uint64_t y = (x & a) | z;
            double w = 1;
            for (unsigned i = 0; i < 6; ++i)
                if (!((a >> i) & 1U)) w *= ((y >> i) & 1U) ? p : 1 - p;
            g[x] += w * f.values[y];
        }
    auto oracle = naive_transform(boolean_fn(6, g, p));
    auto got = restrict_spectrum(f, a);
    for (std::size_t k = 0; k < 64; ++k) ASSERT_NEAR(got.coeffs[k], oracle[k], 1e-10);
    auto zeroed = zero_outside(biased_transform(f), a);
    for (std::size_t k = 0; k < 64; ++k) ASSERT_NEAR(got.coeffs[k], zeroed.coeffs[k], 1e-12);
}

TEST(NoiseMass, EndpointsAndMonotone) {
    auto s = biased_transform(random_fn(8, 0.2, 5, true));
    auto lp = level_profile(s);
    EXPECT_NEAR(noise_mass(s, 1.0), lp.total, 1e-12);
    EXPECT_NEAR(noise_mass(s, 0.0), s.coeffs[0] * s.coeffs[0], 1e-15);
    double prev = -1;
    for (double rho = 0; rho <= 1.0; rho += 0.1) {
        double m = noise_mass(s, rho);
        EXPECT_GE(m, prev - 1e-15);
        prev = m;
    }
    EXPECT_THROW(noise_mass(s, 1.5), parameter_error);
}

TEST(Hypercontractive, RandomIndicators) {
    counter_rng rng(6, 0);
    for (int i = 0; i < 500; ++i) {
        unsigned n = 1 + static_cast<unsigned>(rng.below(12));
        double p = 0.05 + 0.9 * rng.uniform();
        double q = std::exp(std::log(1e-3) + rng.uniform() * std::log(900.0));
        std::vector<double> v(std::size_t{1} << n);
        for (auto& x : v) x = rng.bernoulli(q) ? 1.0 : 0.0;
        auto r = hypercontractive_check(boolean_fn(n, v, p));
        ASSERT_TRUE(r.pass) << n << " " << p << " " << r.mass << " " << r.bound;
    }
}

TEST(OrbitRestriction, TransitiveSingletonIsExact) {
    const unsigned n = 7;
    std::vector<perm> cyc;
    for (unsigned s = 0; s < n; ++s) {
        perm pi(n);
        for (unsigned i = 0; i < n; ++i) pi[i] = (i + s) % n;
        cyc.push_back(pi);
    }
    auto g = group_sampler::from_list(n, cyc);
    std::uint64_t a = 0b0010110;
    for (unsigned i = 0; i < n; ++i) EXPECT_NEAR(orbit_restriction_prob(g, 1ULL << i, a).value, 3.0 / 7.0, 1e-15);
    EXPECT_THROW(orbit_restriction_prob(g, 0, a), parameter_error);
}

TEST(OrbitRestriction, SymmetricGroupMatchesBinomialRatio) {
    for (unsigned n = 2; n <= 6; ++n) {
        auto g = symmetric_group(n);
        for (std::uint64_t a = 0; a < (1ULL << n); ++a)
            for (std::uint64_t s = 1; s < (1ULL << n); ++s) {
                unsigned k = std::popcount(s), na = std::popcount(a);
                double expect = binom_d(na, k) / binom_d(n, k);
                ASSERT_NEAR(orbit_restriction_prob(g, s, a).value, expect, 1e-12);
            }
    }
}

TEST(OrbitRestriction, GlMatchesGaussianBinomial) {
    for (unsigned m = 2; m <= 4; ++m) {
        auto g = gl_shifted_group(m);
        unsigned n = (1U << m) - 1;
        for (unsigned ell = 1; ell < m; ++ell) {
            std::uint64_t a = (1ULL << ((1U << (m - ell)) - 1)) - 1;
            auto table = orbit_restriction_table(g.elements, n, a);
            for (std::uint64_t s = 1; s < (1ULL << n); s += 7) {
                std::vector<std::uint64_t> vecs;
                for (std::uint64_t b = s; b; b &= b - 1) vecs.push_back(static_cast<std::uint64_t>(std::countr_zero(b)) + 1);
                unsigned d = static_cast<unsigned>(set_dim(vecs));
                double expect = static_cast<double>(rational(gaussian_binomial(m - ell, d), gaussian_binomial(m, d)));
                ASSERT_NEAR(orbit_restriction_prob(g, s, a).value, expect, 1e-12);
                ASSERT_NEAR(table[s], expect, 1e-12);
            }
        }
    }
}

TEST(Symmetry, DetectsForeignPermutation) {
    auto maj = majority3_fn(0.5);
    EXPECT_NO_THROW(check_symmetry(maj, symmetric_group(3)));
    auto f = boolean_fn(3, {0, 1, 0, 0, 0, 0, 0, 0}, 0.5);
    EXPECT_THROW(check_symmetry(f, symmetric_group(3)), structure_error);
    EXPECT_THROW(restriction_identity_check(f, symmetric_group(3), 1, 1), structure_error);
}

TEST(RestrictionIdentity, MajorityOneThird) {
    auto maj = majority3_fn(0.5);
    auto s = biased_transform(maj);
    double lvl1 = s.coeffs[1] * s.coeffs[1] + s.coeffs[2] * s.coeffs[2] + s.coeffs[4] * s.coeffs[4];
    auto r = restriction_identity_check(maj, symmetric_group(3), 1, 1);
    EXPECT_NEAR(r.lhs, lvl1 / 3, 1e-12);
    EXPECT_TRUE(r.pass);
    EXPECT_TRUE(r.var_pass);
}

TEST(RestrictionIdentity, RmIndicatorUnderGl) {
    auto f = extrinsic_indicator(rm_generator(1, 3), channel_model::bec(0.3), 0);
    auto g = gl_shifted_group(3);
    for (std::uint64_t a : {0b0000111ULL, 0b1010100ULL, 0b0110001ULL})
        for (unsigned k = 0; k <= 7; ++k) {
            auto r = restriction_identity_check(f, g, a, k);
            EXPECT_NEAR(r.lhs, r.rhs, 1e-9);
            EXPECT_TRUE(r.pass && r.var_pass);
        }
}

TEST(LevelK, ConstantAndRandom) {
    EXPECT_NEAR(level_k_constant(0.5), 1 / (8 * std::log(2.0)), 1e-15);
    EXPECT_NEAR(level_k_constant(0.5), 0.18034, 1e-5);
    auto zero = level_k_check(boolean_fn(4, std::vector<double>(16, 0.0), 0.3));
    EXPECT_TRUE(zero.degenerate);
    EXPECT_TRUE(zero.pass);
    for (double p : {0.1, 0.3, 0.5})
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            auto r = level_k_check(random_fn(10, p, 100 + seed, true));
            ASSERT_TRUE(r.pass);
            for (const auto& row : r.eps_rows) ASSERT_TRUE(row.pass);
        }
    EXPECT_THROW(level_k_check(random_fn(3, 0.5, 1)), parameter_error);
}

TEST(GlRestriction, RmIndicatorsSatisfyBound) {
    for (unsigned m = 3; m <= 4; ++m)
        for (double p : {0.1, 0.3}) {
            auto f = extrinsic_indicator(rm_generator(1, m), channel_model::bec(p), 0);
            for (unsigned ell = 1; ell <= 2; ++ell) {
                auto r = gl_restriction_check(f, m, ell);
                EXPECT_LE(r.restricted_mass, r.dim_weighted + 1e-12);
                EXPECT_TRUE(r.pass);
            }
        }
}
