#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rmnest/codes.hpp"
#include "rmnest/errors.hpp"
#include "rmnest/rng.hpp"

namespace rmnest {

struct look_family {
    unsigned m = 0, s = 0, t = 0;
    std::vector<std::vector<std::size_t>> looks;        // ascending indices over [2^m]
    std::vector<std::vector<std::uint64_t>> subspace_bases;
    rational pairwise_overlap;
};

/// Look i frees the low m-st bits and the i-th block of t bits above them.
inline look_family multi_look_family(unsigned m, unsigned s, unsigned t) {
    require(s >= 1 && t >= 1, "multi_look_family: s, t must be positive");
    require(s * t <= m, "multi_look_family: need s*t <= m");
    require(m <= 24, "multi_look_family: m above 24");
    look_family f{m, s, t, {}, {}, rational(1, std::int64_t{1} << t)};
    unsigned common = m - s * t;
    for (unsigned i = 0; i < s; ++i) {
        std::vector<std::uint64_t> basis;
        for (unsigned b = 0; b < common; ++b) basis.push_back(std::uint64_t{1} << b);
        for (unsigned b = 0; b < t; ++b) basis.push_back(std::uint64_t{1} << (common + i * t + b));
        std::uint64_t free_mask = 0;
        for (auto v : basis) free_mask |= v;
        std::vector<std::size_t> idx;
        // enumerate submasks of free_mask in ascending order
        for (std::uint64_t y = 0;; y = ((y | ~free_mask) + 1) & free_mask) {
            idx.push_back(static_cast<std::size_t>(y));
            if (y == free_mask) break;
        }
        f.looks.push_back(std::move(idx));
        f.subspace_bases.push_back(std::move(basis));
    }
    return f;
}

/// Number of d-dimensional subspaces of F_2^m.
inline big_int gaussian_binomial(unsigned m, unsigned d) {
    require(m <= 64, "gaussian_binomial: m above 64");
    if (d > m) return 0;
    big_int num = 1, den = 1;
    for (unsigned i = 0; i < d; ++i) {
        num *= (big_int(1) << (m - i)) - 1;
        den *= (big_int(1) << (d - i)) - 1;
    }
    return num / den;
}

inline int set_dim(const std::vector<std::uint64_t>& vectors) { return rank_words(vectors); }

inline int set_dim(const std::vector<bit_vec>& vectors) {
    return static_cast<int>(rref(vectors).size());
}

/// All elements of the span of a basis (words), ascending by basis combination.
inline std::vector<std::uint64_t> span_of(const std::vector<std::uint64_t>& basis) {
    std::vector<std::uint64_t> out(std::size_t{1} << basis.size());
    for (std::size_t u = 1; u < out.size(); ++u)
        out[u] = out[u & (u - 1)] ^ basis[static_cast<std::size_t>(std::countr_zero(u))];
    return out;
}

// ---- GF(2^n) -------------------------------------------------------------

/// Conway polynomials over F_2 for degrees 1..16 (bit i = coefficient of x^i).
inline constexpr std::array<std::uint32_t, 17> conway_polynomials = {
    0,      0x3,    0x7,    0xb,    0x13,   0x25,   0x5b,   0x83,   0x11d,
    0x211,  0x46f,  0x805,  0x10eb, 0x201b, 0x40a9, 0x8035, 0x1002d};

class gf2n_field {
public:
    explicit gf2n_field(unsigned n) : n_(n) {
        if (n < 1 || n > 16) throw feasibility_error("gf2n_field: degree must be in [1,16]");
        poly_ = conway_polynomials[n];
    }
    unsigned degree() const { return n_; }
    std::uint32_t modulus() const { return poly_; }
    std::uint32_t order() const { return (std::uint32_t{1} << n_) - 1; }

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        std::uint32_t r = 0;
        while (b) {
            if (b & 1U) r ^= a;
            b >>= 1;
            a <<= 1;
            if ((a >> n_) & 1U) a ^= poly_;
        }
        return r;
    }
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
        std::uint32_t r = 1;
        while (e) {
            if (e & 1U) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    /// Multiplicative order of a nonzero element.
    std::uint32_t element_order(std::uint32_t a) const {
        std::uint32_t ord = order();
        for (std::uint32_t q : prime_factors(ord))
            while (ord % q == 0 && pow(a, ord / q) == 1) ord /= q;
        return ord;
    }
    std::uint32_t primitive_element() const {
        // x itself for a Conway modulus; later candidates only as a fallback
        for (std::uint32_t a = n_ == 1 ? 1 : 2; a <= order(); ++a)
            if (element_order(a) == order()) return a;
        throw structure_error("gf2n_field: no primitive element");
    }

    static std::vector<std::uint32_t> prime_factors(std::uint32_t x) {
        std::vector<std::uint32_t> f;
        for (std::uint32_t d = 2; d * d <= x; ++d)
            if (x % d == 0) {
                f.push_back(d);
                while (x % d == 0) x /= d;
            }
        if (x > 1) f.push_back(x);
        return f;
    }

private:
    unsigned n_;
    std::uint32_t poly_;
};

struct spread_family_t {
    unsigned s = 0, t = 0, field_degree = 0;
    std::vector<std::vector<std::uint64_t>> subspaces;  // basis words per subspace
    std::uint64_t count = 0;
};

/// Cyclic orbit spread: V_i = alpha^i * F_{2^s} inside F_{2^{st}}.
inline spread_family_t spread_family(unsigned s, unsigned t) {
    require(s >= 1 && t >= 1, "spread_family: s, t must be positive");
    if (s * t > 16) throw feasibility_error("spread_family: s*t above 16");
    unsigned n = s * t;
    gf2n_field f(n);
    std::uint32_t alpha = f.primitive_element();
    std::uint32_t big_m = f.order() / ((std::uint32_t{1} << s) - 1);
    std::uint32_t beta = f.pow(alpha, big_m);
    spread_family_t out{s, t, n, {}, big_m};
    std::uint32_t ai = 1;
    for (std::uint32_t i = 0; i < big_m; ++i, ai = f.mul(ai, alpha)) {
        std::vector<std::uint64_t> basis;
        std::uint32_t e = ai;
        for (std::uint32_t j = 0; j + 1 < (std::uint32_t{1} << s) && basis.size() < s; ++j, e = f.mul(e, beta)) {
            basis.push_back(e);
            if (rank_words(basis) < static_cast<int>(basis.size())) basis.pop_back();
        }
        out.subspaces.push_back(std::move(basis));
    }
    return out;
}

// ---- GL(m,2) -------------------------------------------------------------

/// Invertible m x m matrix over F_2; row i holds the coefficients of output bit i.
struct invertible_map {
    unsigned m = 0;
    std::vector<std::uint32_t> rows;
    std::vector<std::size_t> induced_perm;  // index i -> index of M*theta(i)

    std::uint32_t apply(std::uint32_t x) const {
        std::uint32_t y = 0;
        for (unsigned i = 0; i < m; ++i) y |= static_cast<std::uint32_t>(parity(rows[i] & x)) << i;
        return y;
    }
    /// pi(i) = sigma(i+1) - 1 on the 2^m - 1 nonzero points.
    std::vector<std::size_t> shifted_perm() const {
        std::vector<std::size_t> p(induced_perm.size() - 1);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = induced_perm[i + 1] - 1;
        return p;
    }
};

inline invertible_map make_invertible_map(unsigned m, std::vector<std::uint32_t> rows) {
    require(m >= 1 && m <= 24 && rows.size() == m, "invertible_map: bad shape");
    std::vector<std::uint64_t> w(rows.begin(), rows.end());
    if (rank_words(w) != static_cast<int>(m)) throw parameter_error("invertible_map: singular matrix");
    invertible_map g{m, std::move(rows), {}};
    g.induced_perm.resize(std::size_t{1} << m);
    for (std::uint32_t x = 0; x < (std::uint32_t{1} << m); ++x) g.induced_perm[x] = g.apply(x);
    return g;
}

inline invertible_map sample_gl(unsigned m, counter_rng& rng) {
    require(m >= 1 && m <= 24, "sample_gl: m must be in [1,24]");
    std::uint32_t mask = m == 32 ? ~0U : ((std::uint32_t{1} << m) - 1);
    for (;;) {
        std::vector<std::uint32_t> rows(m);
        std::vector<std::uint64_t> w(m);
        for (unsigned i = 0; i < m; ++i) w[i] = rows[i] = static_cast<std::uint32_t>(rng()) & mask;
        if (rank_words(w) == static_cast<int>(m)) return make_invertible_map(m, std::move(rows));
    }
}

/// Every element of GL(m,2), m <= 4.
inline std::vector<invertible_map> enumerate_gl(unsigned m) {
    if (m < 1 || m > 4) throw feasibility_error("enumerate_gl: m must be in [1,4]");
    std::vector<invertible_map> out;
    std::uint64_t total = std::uint64_t{1} << (m * m);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<std::uint32_t> rows(m);
        std::vector<std::uint64_t> w(m);
        for (unsigned i = 0; i < m; ++i)
            w[i] = rows[i] = static_cast<std::uint32_t>((code >> (i * m)) & ((1U << m) - 1));
        if (rank_words(w) == static_cast<int>(m)) out.push_back(make_invertible_map(m, std::move(rows)));
    }
    return out;
}

}  // namespace rmnest
