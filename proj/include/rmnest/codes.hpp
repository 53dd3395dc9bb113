#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rmnest/bitvec.hpp"
#include "rmnest/errors.hpp"

namespace rmnest {

using big_int = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

inline big_int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    big_int r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Reduce rows to reduced row echelon form; zero rows are dropped and the
/// result is sorted by pivot.
inline std::vector<bit_vec> rref(std::vector<bit_vec> rows) {
    std::vector<bit_vec> basis;
    std::vector<std::size_t> piv;
    for (auto& v : rows) {
        for (std::size_t j = 0; j < basis.size(); ++j)
            if (v.get(piv[j])) v ^= basis[j];
        if (!v.any()) continue;
        std::size_t p = v.first_set();
        for (std::size_t j = 0; j < basis.size(); ++j)
            if (basis[j].get(p)) basis[j] ^= v;
        basis.push_back(std::move(v));
        piv.push_back(p);
    }
    std::vector<std::size_t> order(basis.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return piv[a] < piv[b]; });
    std::vector<bit_vec> out;
    out.reserve(basis.size());
    for (auto i : order) out.push_back(std::move(basis[i]));
    return out;
}

/// Rank over GF(2) of a set of words (each word one vector).
inline int rank_words(std::vector<std::uint64_t> v) {
    int r = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i]) continue;
        ++r;
        std::uint64_t low = v[i] & (~v[i] + 1);
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[j] & low) v[j] ^= v[i];
    }
    return r;
}

/// Linear binary code, stored as the canonical RREF generator basis.
class binary_code {
public:
    binary_code() = default;
    binary_code(std::size_t length, std::vector<bit_vec> generators) : n_(length) {
        for (const auto& g : generators)
            if (g.size() != length) throw parameter_error("generator length differs from code length");
        rows_ = rref(std::move(generators));
        for (const auto& r : rows_) pivots_.push_back(r.first_set());
    }

    std::size_t length() const { return n_; }
    std::size_t dim() const { return rows_.size(); }
    rational rate() const {
        if (n_ == 0) throw parameter_error("rate of empty code");
        return rational(static_cast<long long>(dim()), static_cast<long long>(n_));
    }
    const std::vector<bit_vec>& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    bit_vec reduce(bit_vec v) const {
        for (std::size_t j = 0; j < rows_.size(); ++j)
            if (v.get(pivots_[j])) v ^= rows_[j];
        return v;
    }
    bool contains(const bit_vec& v) const { return !reduce(v).any(); }

    /// Codeword for message bits u (bit j selects generator row j), length <= 64.
    std::uint64_t encode_word(std::uint64_t u) const {
        std::uint64_t c = 0;
        for (std::size_t j = 0; j < rows_.size(); ++j)
            if ((u >> j) & 1U) c ^= rows_[j].word0();
        return c;
    }

    /// Parity-check rows spanning the dual code.
    std::vector<bit_vec> parity_check() const {
        std::vector<char> is_piv(n_, 0);
        for (auto p : pivots_) is_piv[p] = 1;
        std::vector<bit_vec> h;
        for (std::size_t f = 0; f < n_; ++f) {
            if (is_piv[f]) continue;
            bit_vec r(n_);
            r.set(f);
            for (std::size_t j = 0; j < rows_.size(); ++j)
                if (rows_[j].get(f)) r.set(pivots_[j]);
            h.push_back(std::move(r));
        }
        return h;
    }

    binary_code dual() const { return binary_code(n_, parity_check()); }

    friend bool operator==(const binary_code& a, const binary_code& b) {
        return a.n_ == b.n_ && a.rows_ == b.rows_;
    }

private:
    std::size_t n_ = 0;
    std::vector<bit_vec> rows_;
    std::vector<std::size_t> pivots_;
};

/// Bits of idx, least significant first.
inline std::vector<int> theta_map(unsigned m, std::uint64_t idx) {
    require(m <= 63 && idx < (std::uint64_t{1} << m), "theta_map: index out of range");
    std::vector<int> b(m);
    for (unsigned i = 0; i < m; ++i) b[i] = static_cast<int>((idx >> i) & 1U);
    return b;
}

inline std::uint64_t theta_index(const std::vector<int>& bits) {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) idx |= std::uint64_t{1} << i;
    return idx;
}

inline big_int rm_dim(unsigned r, unsigned m) {
    big_int d = 0;
    for (unsigned i = 0; i <= std::min(r, m); ++i) d += binomial(m, i);
    return d;
}

inline rational rm_rate_exact(unsigned r, unsigned m) {
    require(r <= m, "rm_rate_exact: need r <= m");
    return rational(rm_dim(r, m), big_int(1) << m);
}

/// Reed-Muller code RM(r, m): coordinate y evaluates monomial with variable
/// mask t to 1 iff (y & t) == t.
inline binary_code rm_generator(unsigned r, unsigned m) {
    require(r <= m, "rm_generator: need r <= m");
    require(m <= 24, "rm_generator: m above 24");
    std::size_t n = std::size_t{1} << m;
    std::vector<bit_vec> gens;
    for (std::uint32_t t = 0; t < (std::uint32_t{1} << m); ++t) {
        if (static_cast<unsigned>(std::popcount(t)) > r) continue;
        bit_vec row(n);
        for (std::uint32_t y = 0; y < n; ++y)
            if ((y & t) == t) row.set(y);
        gens.push_back(std::move(row));
    }
    return binary_code(n, std::move(gens));
}

inline binary_code repetition_code(std::size_t n) {
    require(n >= 1, "repetition_code: n >= 1");
    bit_vec g(n);
    for (std::size_t i = 0; i < n; ++i) g.set(i);
    return binary_code(n, {g});
}

inline binary_code spc_code(std::size_t n) {
    require(n >= 1, "spc_code: n >= 1");
    std::vector<bit_vec> gens;
    for (std::size_t i = 1; i < n; ++i) {
        bit_vec g(n);
        g.set(0);
        g.set(i);
        gens.push_back(g);
    }
    return binary_code(n, gens);
}

/// Restriction to the listed coordinates (strictly ascending).
inline binary_code project(const binary_code& c, const std::vector<std::size_t>& coords) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i] >= c.length()) throw parameter_error("project: coordinate out of range");
        if (i && coords[i] <= coords[i - 1])
            throw parameter_error("project: coordinates must be strictly ascending");
    }
    std::vector<bit_vec> gens;
    for (const auto& r : c.rows()) {
        bit_vec g(coords.size());
        for (std::size_t i = 0; i < coords.size(); ++i)
            if (r.get(coords[i])) g.set(i);
        gens.push_back(std::move(g));
    }
    return binary_code(coords.size(), std::move(gens));
}

inline bool codes_equal(const binary_code& a, const binary_code& b) {
    if (a.length() != b.length()) throw parameter_error("codes_equal: length mismatch");
    return a == b;
}

inline std::size_t min_distance(const binary_code& c) {
    if (c.dim() == 0) throw undefined_distance_error("min_distance: zero code");
    if (c.dim() > 24) throw feasibility_error("min_distance: dimension above 24");
    std::size_t best = c.length();
    bit_vec cw(c.length());
    // Gray-code walk: each step flips one generator
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << c.dim()); ++i) {
        cw ^= c.rows()[static_cast<std::size_t>(std::countr_zero(i))];
        best = std::min(best, cw.weight());
    }
    return best;
}

/// Is the code mapped onto itself by coordinate map i -> perm[i]?
inline bool is_automorphism(const binary_code& c, const std::vector<std::size_t>& perm) {
    if (perm.size() != c.length()) throw parameter_error("is_automorphism: permutation length");
    std::vector<char> seen(perm.size(), 0);
    for (auto p : perm) {
        if (p >= perm.size() || seen[p]) throw parameter_error("is_automorphism: not a permutation");
        seen[p] = 1;
    }
    for (const auto& r : c.rows()) {
        bit_vec img(c.length());
        for (std::size_t i = 0; i < c.length(); ++i)
            if (r.get(i)) img.set(perm[i]);
        if (!c.contains(img)) return false;
    }
    return true;
}

/// All codewords as words (length <= 64), in message order.
inline std::vector<std::uint64_t> codewords(const binary_code& c) {
    if (c.length() > 64) throw feasibility_error("codewords: length above 64");
    if (c.dim() > 24) throw feasibility_error("codewords: dimension above 24");
    std::vector<std::uint64_t> out(std::size_t{1} << c.dim());
    for (std::size_t u = 1; u < out.size(); ++u)
        out[u] = out[u & (u - 1)] ^ c.rows()[static_cast<std::size_t>(std::countr_zero(u))].word0();
    return out;
}

// Text form: "N dim" on the first line, then dim rows of '0'/'1'.
inline void write_code(std::ostream& os, const binary_code& c) {
    os << c.length() << ' ' << c.dim() << '\n';
    for (const auto& r : c.rows()) os << r.to_string() << '\n';
}

inline binary_code read_code(std::istream& is) {
    long long n = -1, k = -1;
    if (!(is >> n >> k) || n < 0 || k < 0) throw parameter_error("code text: bad header");
    std::vector<bit_vec> gens;
    for (long long i = 0; i < k; ++i) {
        std::string row;
        if (!(is >> row)) throw parameter_error("code text: missing generator row");
        if (row.size() != static_cast<std::size_t>(n)) throw parameter_error("code text: row length");
        gens.push_back(bit_vec::from_string(row));
    }
    return binary_code(static_cast<std::size_t>(n), std::move(gens));
}

inline std::string code_to_text(const binary_code& c) {
    std::ostringstream os;
    write_code(os, c);
    return os.str();
}

inline binary_code code_from_text(const std::string& s) {
    std::istringstream is(s);
    return read_code(is);
}

}  // namespace rmnest
