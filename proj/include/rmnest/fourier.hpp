#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "rmnest/errors.hpp"
#include "rmnest/rng.hpp"
#include "rmnest/subspaces.hpp"

namespace rmnest {

/// Real function on {0,1}^n under the product measure with Pr(x_i = 1) = p.
/// values[x] with bit i of x holding x_i.
struct boolean_fn {
    unsigned n = 0;
    std::vector<double> values;
    double p = 0.5;

    boolean_fn() = default;
    boolean_fn(unsigned arity, std::vector<double> table, double bias) : n(arity), values(std::move(table)), p(bias) {
        if (n > 24) throw feasibility_error("boolean_fn: arity above 24");
        require(values.size() == (std::size_t{1} << n), "boolean_fn: table length must be 2^n");
        require(p > 0.0 && p < 1.0, "boolean_fn: bias must lie in (0,1)");
    }
};

struct spectrum {
    unsigned n = 0;
    std::vector<double> coeffs;  // indexed by subset mask
    double p = 0.5;
};

inline double measure(std::uint64_t x, unsigned n, double p) {
    int w = std::popcount(x);
    return std::pow(p, w) * std::pow(1.0 - p, static_cast<int>(n) - w);
}

inline double expectation(const boolean_fn& f) {
    long double s = 0;
    for (std::size_t x = 0; x < f.values.size(); ++x) s += measure(x, f.n, f.p) * f.values[x];
    return static_cast<double>(s);
}

inline double second_moment(const boolean_fn& f) {
    long double s = 0;
    for (std::size_t x = 0; x < f.values.size(); ++x) s += measure(x, f.n, f.p) * f.values[x] * f.values[x];
    return static_cast<double>(s);
}

/// Basis r(0) = sqrt(p/(1-p)), r(1) = -sqrt((1-p)/p); u_S(x) = prod_{i in S} r(x_i).
inline double basis_value(std::uint64_t s, std::uint64_t x, double p) {
    double r0 = std::sqrt(p / (1.0 - p)), r1 = -std::sqrt((1.0 - p) / p);
    double v = 1.0;
    for (std::uint64_t b = s; b; b &= b - 1) v *= ((x >> std::countr_zero(b)) & 1U) ? r1 : r0;
    return v;
}

inline spectrum biased_transform(const boolean_fn& f) {
    spectrum s{f.n, f.values, f.p};
    double q = 1.0 - f.p, c = std::sqrt(f.p * q);
    for (unsigned i = 0; i < f.n; ++i) {
        std::size_t bit = std::size_t{1} << i;
        for (std::size_t x = 0; x < s.coeffs.size(); ++x) {
            if (x & bit) continue;
            double a = s.coeffs[x], b = s.coeffs[x | bit];
            s.coeffs[x] = q * a + f.p * b;
            s.coeffs[x | bit] = c * (a - b);
        }
    }
    return s;
}

inline boolean_fn inverse_transform(const spectrum& s) {
    boolean_fn f;
    f.n = s.n;
    f.p = s.p;
    f.values = s.coeffs;
    double r0 = std::sqrt(s.p / (1.0 - s.p)), r1 = -std::sqrt((1.0 - s.p) / s.p);
    for (unsigned i = 0; i < s.n; ++i) {
        std::size_t bit = std::size_t{1} << i;
        for (std::size_t x = 0; x < f.values.size(); ++x) {
            if (x & bit) continue;
            double a = f.values[x], b = f.values[x | bit];
            f.values[x] = a + b * r0;
            f.values[x | bit] = a + b * r1;
        }
    }
    return f;
}

/// f_A: average out the coordinates outside the mask a.
inline boolean_fn restrict_function(const boolean_fn& f, std::uint64_t a) {
    boolean_fn g = f;
    for (unsigned i = 0; i < f.n; ++i) {
        std::size_t bit = std::size_t{1} << i;
        if (a & bit) continue;
        for (std::size_t x = 0; x < g.values.size(); ++x) {
            if (x & bit) continue;
            double v = (1.0 - f.p) * g.values[x] + f.p * g.values[x | bit];
            g.values[x] = g.values[x | bit] = v;
        }
    }
    return g;
}

inline spectrum restrict_spectrum(const boolean_fn& f, std::uint64_t a) { return biased_transform(restrict_function(f, a)); }

/// Zero every coefficient whose set is not inside a.
inline spectrum zero_outside(spectrum s, std::uint64_t a) {
    for (std::size_t m = 0; m < s.coeffs.size(); ++m)
        if (m & ~a) s.coeffs[m] = 0.0;
    return s;
}

struct level_profile_t {
    std::vector<double> level_mass;  // index k: sum over |S| = k
    double variance = 0;
    double total = 0;
};

inline level_profile_t level_profile(const spectrum& s) {
    level_profile_t lp;
    lp.level_mass.assign(s.n + 1, 0.0);
    for (std::size_t m = 0; m < s.coeffs.size(); ++m) lp.level_mass[std::popcount(m)] += s.coeffs[m] * s.coeffs[m];
    for (unsigned k = 0; k <= s.n; ++k) {
        lp.total += lp.level_mass[k];
        if (k) lp.variance += lp.level_mass[k];
    }
    return lp;
}

/// sum_S coeff(S)^2 rho^|S|.
inline double noise_mass(const spectrum& s, double rho) {
    require(rho >= 0.0 && rho <= 1.0, "noise_mass: rho outside [0,1]");
    auto lp = level_profile(s);
    double v = 0;
    for (unsigned k = 0; k <= s.n; ++k) v += lp.level_mass[k] * std::pow(rho, static_cast<double>(k));
    return v;
}

// ---- permutations and groups ---------------------------------------------

using perm = std::vector<std::size_t>;

/// Image of a subset mask: {perm[i] : i in mask}.
inline std::uint64_t map_mask(const perm& pi, std::uint64_t mask) {
    std::uint64_t out = 0;
    for (std::uint64_t b = mask; b; b &= b - 1) out |= std::uint64_t{1} << pi[std::countr_zero(b)];
    return out;
}

/// Either an explicit list of group elements or a sampler of uniform elements.
struct group_sampler {
    unsigned n = 0;
    std::vector<perm> elements;
    std::function<perm(counter_rng&)> draw;

    bool exhaustive() const { return !elements.empty(); }

    static group_sampler from_list(unsigned n, std::vector<perm> elems) {
        require(!elems.empty(), "group_sampler: empty element list");
        for (const auto& e : elems) require(e.size() == n, "group_sampler: permutation size");
        return {n, std::move(elems), {}};
    }
    static group_sampler from_sampler(unsigned n, std::function<perm(counter_rng&)> d) { return {n, {}, std::move(d)}; }
};

/// All n! permutations of [n] (n <= 8).
inline group_sampler symmetric_group(unsigned n) {
    require(n >= 1 && n <= 8, "symmetric_group: n must be in [1,8]");
    perm p(n);
    for (unsigned i = 0; i < n; ++i) p[i] = i;
    std::vector<perm> all;
    do all.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return group_sampler::from_list(n, std::move(all));
}

/// GL(m,2) acting on the 2^m - 1 nonzero points, point i <-> vector i+1.
inline group_sampler gl_shifted_group(unsigned m) {
    unsigned n = (1U << m) - 1;
    if (m <= 4) {
        std::vector<perm> all;
        for (const auto& g : enumerate_gl(m)) all.push_back(g.shifted_perm());
        return group_sampler::from_list(n, std::move(all));
    }
    return group_sampler::from_sampler(n, [m](counter_rng& rng) { return sample_gl(m, rng).shifted_perm(); });
}

/// Throws structure_error unless f(pi x) = f(x) for the tested elements; checks every x when
/// 2^n <= 4096, otherwise `points` random x per element.
inline void check_symmetry(const boolean_fn& f, const group_sampler& g, std::uint64_t seed = 7, unsigned points = 100,
                           unsigned sampled_elements = 64) {
    require(g.n == f.n, "check_symmetry: group acts on a different arity");
    auto check_one = [&](const perm& pi, counter_rng& rng) {
        std::size_t size = f.values.size();
        bool all = size <= 4096;
        std::size_t count = all ? size : points;
        for (std::size_t i = 0; i < count; ++i) {
            std::uint64_t x = all ? i : rng.below(size);
            if (f.values[map_mask(pi, x)] != f.values[x]) throw structure_error("group element outside Sym(f)");
        }
    };
    counter_rng rng(seed, 0);
    if (g.exhaustive())
        for (const auto& pi : g.elements) check_one(pi, rng);
    else
        for (unsigned i = 0; i < sampled_elements; ++i) check_one(g.draw(rng), rng);
}

struct prob_estimate {
    double value = 0;
    double std_error = 0;  // zero when exact
    bool exact = true;
};

/// Pr(Pi(S) subset of A) for Pi uniform on the group.
inline prob_estimate orbit_restriction_prob(const group_sampler& g, std::uint64_t s, std::uint64_t a,
                                            std::uint64_t samples = 100000, std::uint64_t seed = 1) {
    if (!s) throw parameter_error("orbit_restriction_prob: S must be nonempty");
    if (g.n > 64) throw feasibility_error("orbit_restriction_prob: masks limited to 64 coordinates");
    if (g.exhaustive()) {
        std::size_t hit = 0;
        for (const auto& pi : g.elements) hit += (map_mask(pi, s) & ~a) == 0;
        return {static_cast<double>(hit) / static_cast<double>(g.elements.size()), 0.0, true};
    }
    std::uint64_t hit = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        counter_rng rng(seed, i);
        hit += (map_mask(g.draw(rng), s) & ~a) == 0;
    }
    double ph = static_cast<double>(hit) / static_cast<double>(samples);
    return {ph, std::sqrt(ph * (1 - ph) / static_cast<double>(samples)), false};
}

/// Exact Pr(Pi(S) subset of A) for every mask S at once: count the masks Pi^{-1}(A) and take
/// superset sums.
inline std::vector<double> orbit_restriction_table(const std::vector<perm>& elements, unsigned n, std::uint64_t a) {
    if (n > 24) throw feasibility_error("orbit_restriction_table: n above 24");
    std::vector<double> cnt(std::size_t{1} << n, 0.0);
    for (const auto& pi : elements) {
        std::uint64_t pre = 0;  // {i : pi(i) in A}
        for (unsigned i = 0; i < n; ++i)
            if ((a >> pi[i]) & 1U) pre |= std::uint64_t{1} << i;
        cnt[pre] += 1.0;
    }
    for (unsigned i = 0; i < n; ++i)
        for (std::size_t m = 0; m < cnt.size(); ++m)
            if (!(m & (std::size_t{1} << i))) cnt[m] += cnt[m | (std::size_t{1} << i)];
    for (auto& c : cnt) c /= static_cast<double>(elements.size());
    return cnt;
}

struct restriction_identity_report {
    unsigned k = 0;
    double lhs = 0, rhs = 0, rhs_std_error = 0;
    double var_lhs = 0, var_rhs = 0, var_rhs_std_error = 0;
    bool exact = true;
    bool pass = false, var_pass = false;
};

/// Level-k mass of the restriction against the orbit-weighted mass of f, plus the
/// variance form summed over k >= 1.
inline restriction_identity_report restriction_identity_check(const boolean_fn& f, const group_sampler& g, std::uint64_t a,
                                                              unsigned k, double tol = 1e-9, std::uint64_t samples = 20000,
                                                              std::uint64_t seed = 1) {
    check_symmetry(f, g);
    auto fs = biased_transform(f);
    auto fa = restrict_spectrum(f, a);
    restriction_identity_report r;
    r.k = k;
    for (std::size_t m = 1; m < fa.coeffs.size(); ++m) {
        double c2 = fa.coeffs[m] * fa.coeffs[m];
        if (static_cast<unsigned>(std::popcount(m)) == k) r.lhs += c2;
        r.var_lhs += c2;
    }
    if (k == 0) r.lhs = fa.coeffs[0] * fa.coeffs[0];
    if (g.exhaustive()) {
        auto pr = orbit_restriction_table(g.elements, f.n, a);
        for (std::size_t m = 0; m < fs.coeffs.size(); ++m) {
            double c2 = fs.coeffs[m] * fs.coeffs[m];
            if (static_cast<unsigned>(std::popcount(m)) == k) r.rhs += c2 * pr[m];
            if (m) r.var_rhs += c2 * pr[m];
        }
        r.pass = std::abs(r.lhs - r.rhs) <= tol;
        r.var_pass = std::abs(r.var_lhs - r.var_rhs) <= tol;
        return r;
    }
    r.exact = false;
    long double s1 = 0, s2 = 0, v1 = 0, v2 = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        counter_rng rng(seed, i);
        auto pi = g.draw(rng);
        double x = 0, v = 0;
        for (std::size_t m = 0; m < fs.coeffs.size(); ++m) {
            if ((map_mask(pi, m) & ~a) != 0) continue;
            double c2 = fs.coeffs[m] * fs.coeffs[m];
            if (static_cast<unsigned>(std::popcount(m)) == k) x += c2;
            if (m) v += c2;
        }
        s1 += x; s2 += x * x; v1 += v; v2 += v * v;
    }
    auto ns = static_cast<long double>(samples);
    r.rhs = static_cast<double>(s1 / ns);
    r.var_rhs = static_cast<double>(v1 / ns);
    r.rhs_std_error = static_cast<double>(std::sqrt(std::max(0.0L, s2 / ns - (s1 / ns) * (s1 / ns)) / ns));
    r.var_rhs_std_error = static_cast<double>(std::sqrt(std::max(0.0L, v2 / ns - (v1 / ns) * (v1 / ns)) / ns));
    r.pass = std::abs(r.lhs - r.rhs) <= 3 * r.rhs_std_error + tol;
    r.var_pass = std::abs(r.var_lhs - r.var_rhs) <= 3 * r.var_rhs_std_error + tol;
    return r;
}

// ---- level-k and hypercontractivity -----------------------------------------

struct level_k_eps_row {
    double eps, threshold, mass, bound;
    bool pass;
};

struct level_k_report {
    double alpha = 0, lambda = 0, threshold = 0, mass = 0, bound = 0;
    bool degenerate = false, pass = false;
    std::vector<level_k_eps_row> eps_rows;
};

inline void require_indicator(const boolean_fn& f) {
    for (double v : f.values) require(v == 0.0 || v == 1.0, "expected a 0/1-valued function");
}

inline double mass_up_to(const level_profile_t& lp, double threshold) {
    double m = 0;
    for (std::size_t k = 0; k < lp.level_mass.size() && static_cast<double>(k) <= threshold; ++k) m += lp.level_mass[k];
    return m;
}

/// Low-level mass up to (1/8) ln(alpha)/ln(lambda) against alpha^(7/6), and the
/// (1-eps) ln(alpha)/ln(lambda) form against alpha^(2 eps/(1+lambda)).
inline level_k_report level_k_check(const boolean_fn& f, const std::vector<double>& eps_grid = {0.1, 0.25, 0.5, 0.75, 0.875, 0.95}) {
    require_indicator(f);
    auto lp = level_profile(biased_transform(f));
    level_k_report r;
    r.alpha = expectation(f);
    r.lambda = std::min(f.p, 1.0 - f.p);
    if (r.alpha <= 0.0 || r.alpha >= 1.0) {
        r.degenerate = true;
        r.mass = lp.level_mass[0];
        r.bound = r.alpha >= 1.0 ? 1.0 : 0.0;
        r.pass = r.mass <= r.bound + 1e-12;
        return r;
    }
    double ratio = std::log(r.alpha) / std::log(r.lambda);
    r.threshold = ratio / 8.0;
    r.mass = mass_up_to(lp, r.threshold);
    r.bound = std::pow(r.alpha, 7.0 / 6.0);
    r.pass = r.mass <= r.bound * (1 + 1e-12);
    for (double e : eps_grid) {
        level_k_eps_row row{e, (1 - e) * ratio, 0, std::pow(r.alpha, 2 * e / (1 + r.lambda)), false};
        row.mass = mass_up_to(lp, row.threshold);
        row.pass = row.mass <= row.bound * (1 + 1e-12);
        r.eps_rows.push_back(row);
    }
    return r;
}

struct hypercontractive_report {
    double q = 0, rho = 0, mass = 0, bound = 0;
    bool pass = false;
};

/// noise_mass(rho) <= alpha^(2-2/q) at rho = lambda^(1-2/q)/(q-1); q defaults to 1 + 1/lambda.
inline hypercontractive_report hypercontractive_check(const boolean_fn& f, double q = 0.0) {
    require_indicator(f);
    double lambda = std::min(f.p, 1.0 - f.p);
    if (q == 0.0) q = 1.0 + 1.0 / lambda;
    require(q >= 2.0, "hypercontractive_check: q must be at least 2");
    hypercontractive_report r;
    r.q = q;
    r.rho = std::pow(lambda, 1.0 - 2.0 / q) / (q - 1.0);
    r.mass = noise_mass(biased_transform(f), r.rho);
    r.bound = std::pow(expectation(f), 2.0 - 2.0 / q);
    r.pass = r.mass <= r.bound * (1 + 1e-12) + 1e-15;
    return r;
}

struct gl_restriction_report {
    unsigned m = 0, ell = 0;
    double alpha = 0, c = 0;
    double restricted_mass = 0;  // sum_S fhat_A(S)^2
    double dim_weighted = 0;     // sum_S fhat(S)^2 2^(-ell dim S)
    double bound = 0;            // alpha^2 + 2^-ell alpha^(7/6) + alpha (c ln 1/alpha)^-ell
    double stated_bound = 0;     // alpha^2 + alpha (2^-ell alpha^(7/6) + (c ln 1/alpha)^-ell)
    bool pass = false, stated_pass = false;
};

/// Restriction of a GL(m,2)-symmetric indicator on n = 2^m - 1 points to A = {0,...,2^(m-ell)-2}.
inline gl_restriction_report gl_restriction_check(const boolean_fn& f, unsigned m, unsigned ell) {
    require_indicator(f);
    require(f.n == (1U << m) - 1, "gl_restriction_check: arity must be 2^m - 1");
    require(ell >= 1 && ell <= m, "gl_restriction_check: need 1 <= ell <= m");
    gl_restriction_report r;
    r.m = m;
    r.ell = ell;
    std::uint64_t a = (std::uint64_t{1} << ((1U << (m - ell)) - 1)) - 1;
    auto fa = restrict_spectrum(f, a);
    for (double c : fa.coeffs) r.restricted_mass += c * c;
    auto fs = biased_transform(f);
    for (std::size_t s = 0; s < fs.coeffs.size(); ++s) {
        std::vector<std::uint64_t> vecs;
        for (std::uint64_t b = s; b; b &= b - 1) vecs.push_back(static_cast<std::uint64_t>(std::countr_zero(b)) + 1);
        r.dim_weighted += fs.coeffs[s] * fs.coeffs[s] * std::pow(2.0, -static_cast<double>(ell) * set_dim(vecs));
    }
    r.alpha = expectation(f);
    double lambda = std::min(f.p, 1.0 - f.p);
    r.c = 1.0 / (8.0 * std::log(1.0 / lambda));
    double tail = r.alpha > 0 && r.alpha < 1 ? std::pow(r.c * std::log(1.0 / r.alpha), -static_cast<double>(ell))
                                             : (r.alpha >= 1 ? INFINITY : 0.0);
    double lead = std::pow(2.0, -static_cast<double>(ell)) * std::pow(r.alpha, 7.0 / 6.0);
    r.bound = r.alpha * r.alpha + lead + r.alpha * tail;
    r.stated_bound = r.alpha * r.alpha + r.alpha * (lead + tail);
    r.pass = r.restricted_mass <= r.dim_weighted * (1 + 1e-12) + 1e-15 && r.dim_weighted <= r.bound * (1 + 1e-12) + 1e-15;
    r.stated_pass = r.restricted_mass <= r.stated_bound * (1 + 1e-12) + 1e-15;
    return r;
}

}  // namespace rmnest
