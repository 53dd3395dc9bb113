#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "rmnest/channels.hpp"
#include "rmnest/codes.hpp"
#include "rmnest/errors.hpp"
#include "rmnest/rng.hpp"
#include "rmnest/subspaces.hpp"

namespace rmnest {

// ---- word helpers --------------------------------------------------------

/// Drop bit t from w, shifting the higher bits down.
inline std::uint64_t remove_bit(std::uint64_t w, std::size_t t) {
    std::uint64_t low = w & ((std::uint64_t{1} << t) - 1);
    std::uint64_t high = t + 1 >= 64 ? 0 : (w >> (t + 1)) << t;
    return low | high;
}

inline std::uint64_t low_mask(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

/// Column j of the generator rows as a dim-bit word (dim <= 64).
inline std::vector<std::uint64_t> generator_columns(const std::vector<bit_vec>& rows, std::size_t n) {
    if (rows.size() > 64) throw feasibility_error("column words need at most 64 rows");
    std::vector<std::uint64_t> cols(n, 0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (rows[i].get(j)) cols[j] |= std::uint64_t{1} << i;
    return cols;
}

/// Basis indexed by leading (highest) bit; supports membership and insertion.
struct xor_basis {
    std::array<std::uint64_t, 64> v{};

    std::uint64_t reduce(std::uint64_t x) const {
        while (x) {
            int hb = 63 - std::countl_zero(x);
            if (!v[hb]) break;
            x ^= v[hb];
        }
        return x;
    }
    /// Inserts x; returns the slot used or -1 if x was dependent.
    int insert(std::uint64_t x) {
        x = reduce(x);
        if (!x) return -1;
        int hb = 63 - std::countl_zero(x);
        v[hb] = x;
        return hb;
    }
};

// ---- BEC -----------------------------------------------------------------

inline void check_target(const binary_code& code, std::size_t target) {
    if (target >= code.length()) throw parameter_error("target coordinate out of range");
}

/// Target bit determined by the unerased non-target coordinates (pattern bit 1 = erased).
inline bool bec_recoverable(const binary_code& code, const bit_vec& pattern, std::size_t target) {
    check_target(code, target);
    if (pattern.size() != code.length()) throw parameter_error("bec_recoverable: pattern length");
    std::size_t k = code.dim();
    auto column = [&](std::size_t j) {
        bit_vec c(k);
        for (std::size_t i = 0; i < k; ++i)
            if (code.rows()[i].get(j)) c.set(i);
        return c;
    };
    std::vector<bit_vec> cols;
    for (std::size_t j = 0; j < code.length(); ++j)
        if (j != target && !pattern.get(j)) cols.push_back(column(j));
    auto basis = rref(std::move(cols));
    bit_vec c = column(target);
    for (const auto& b : basis)
        if (c.get(b.first_set())) c ^= b;
    return !c.any();
}

namespace detail {

using words = std::vector<std::uint64_t>;

// Reduced echelon form with leading bits descending.
inline words canonical_span(words v) {
    words b;
    for (auto x : v) {
        for (auto y : b)
            if ((x ^ y) < x) x ^= y;
        if (!x) continue;
        for (auto& y : b)
            if ((y ^ x) < y) y ^= x;
        b.push_back(x);
    }
    std::sort(b.begin(), b.end(), std::greater<>());
    return b;
}

inline bool span_contains(const words& canonical, std::uint64_t x) {
    for (auto y : canonical)
        if ((x ^ y) < x) x ^= y;
    return x == 0;
}

// Functionals phi in F_2^k with <phi, b> = 0 for every b in the span.
inline words annihilator(const words& basis, std::size_t k) {
    words b = canonical_span(basis);
    std::uint64_t pivmask = 0;
    std::vector<int> piv;
    for (auto y : b) {
        piv.push_back(63 - std::countl_zero(y));
        pivmask |= std::uint64_t{1} << piv.back();
    }
    words out;
    for (std::size_t f = 0; f < k; ++f) {
        if ((pivmask >> f) & 1U) continue;
        std::uint64_t phi = std::uint64_t{1} << f;
        for (std::size_t i = 0; i < b.size(); ++i)
            if ((b[i] >> f) & 1U) phi |= std::uint64_t{1} << piv[i];
        out.push_back(phi);
    }
    return out;
}

// span(s) intersected with the common kernel of the functionals.
inline words intersect_kernel(const words& s, const words& ann) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> piv;
    words ker;
    for (auto x : s) {
        std::uint64_t val = 0;
        for (std::size_t i = 0; i < ann.size(); ++i)
            if (parity(ann[i] & x)) val |= std::uint64_t{1} << i;
        for (auto& [pv, px] : piv)
            if ((val ^ pv) < val) {
                val ^= pv;
                x ^= px;
            }
        if (!val) ker.push_back(x);
        else {
            piv.emplace_back(val, x);
            std::sort(piv.begin(), piv.end(), [](auto& l, auto& r) { return l.first > r.first; });
        }
    }
    return canonical_span(std::move(ker));
}

struct words_hash {
    std::size_t operator()(const words& k) const {
        std::uint64_t h = k.size();
        for (auto x : k) h = splitmix64(h ^ x);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace detail

/// Number of non-target erasure patterns, by erasure count, that leave the target unrecoverable.
/// Coordinates are decided in order. Whether the target ends up recoverable depends on the
/// unerased span P only through P intersected with span(target column, undecided columns),
/// so patterns are merged on that subspace and carried as count polynomials.
inline std::vector<std::uint64_t> bec_unrecoverable_counts(const binary_code& code, std::size_t target,
                                                           std::size_t state_budget = std::size_t{1} << 24) {
    using detail::words;
    check_target(code, target);
    std::size_t n = code.length(), k = code.dim();
    if (n > 64) throw feasibility_error("exact BEC enumeration needs length <= 64");
    auto g = generator_columns(code.rows(), n);
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < n; ++j)
        if (j != target) order.push_back(j);
    std::size_t others = order.size();
    std::uint64_t g0 = g[target];
    // after deciding order[0..i): annihilator of span(g0, rest) and canonical span(rest)
    std::vector<words> ann(others + 1), future(others + 1);
    for (std::size_t i = 0; i <= others; ++i) {
        words w{g0}, f;
        for (std::size_t j = i; j < others; ++j) {
            w.push_back(g[order[j]]);
            f.push_back(g[order[j]]);
        }
        ann[i] = detail::annihilator(w, k);
        future[i] = detail::canonical_span(f);
    }
    std::vector<std::vector<std::uint64_t>> binom(others + 1, std::vector<std::uint64_t>(others + 1, 0));
    for (std::size_t a = 0; a <= others; ++a) {
        binom[a][0] = 1;
        for (std::size_t b = 1; b <= a; ++b) binom[a][b] = binom[a - 1][b - 1] + binom[a - 1][b];
    }
    std::vector<std::uint64_t> counts(others + 1, 0);
    if (!g0) return counts;  // target bit is 0 in every codeword
    if (!detail::span_contains(future[0], g0)) {
        for (std::size_t x = 0; x <= others; ++x) counts[x] = binom[others][x];
        return counts;
    }
    std::unordered_map<words, std::vector<std::uint64_t>, detail::words_hash> cur, nxt;
    cur[words{}] = {1};
    for (std::size_t i = 1; i <= others; ++i) {
        std::uint64_t gj = g[order[i - 1]];
        std::size_t rest = others - i;
        nxt.clear();
        for (const auto& [st, poly] : cur) {
            for (std::size_t erased = 0; erased < 2; ++erased) {
                words t = st;
                if (!erased) t.push_back(gj);
                t = detail::intersect_kernel(t, ann[i]);
                if (detail::span_contains(t, g0)) continue;  // recoverable for every completion
                words tf = t;
                tf.insert(tf.end(), future[i].begin(), future[i].end());
                if (!detail::span_contains(detail::canonical_span(std::move(tf)), g0)) {
                    // unrecoverable for every completion
                    for (std::size_t e = 0; e < poly.size(); ++e)
                        if (poly[e])
                            for (std::size_t x = 0; x <= rest; ++x) counts[e + erased + x] += poly[e] * binom[rest][x];
                    continue;
                }
                auto& slot = nxt[t];
                if (slot.empty()) slot.assign(i + 1, 0);
                for (std::size_t e = 0; e < poly.size(); ++e) slot[e + erased] += poly[e];
            }
        }
        if (nxt.size() > state_budget) throw feasibility_error("exact BEC enumeration exceeds state budget");
        std::swap(cur, nxt);
    }
    return counts;
}

/// Evaluate sum_e counts[e] p^e (1-p)^(n-e).
inline double erasure_polynomial(const std::vector<std::uint64_t>& counts, double p) {
    std::size_t n = counts.size() - 1;
    long double s = 0;
    for (std::size_t e = 0; e <= n; ++e)
        if (counts[e])
            s += static_cast<long double>(counts[e]) * std::pow(static_cast<long double>(p), static_cast<long double>(e)) *
                 std::pow(1.0L - p, static_cast<long double>(n - e));
    return static_cast<double>(s);
}

inline double bec_exact_pe(const binary_code& code, std::size_t target, double p) {
    return erasure_polynomial(bec_unrecoverable_counts(code, target), p);
}

// ---- syndrome tables -----------------------------------------------------

struct syndrome_table {
    std::size_t n = 0;
    std::vector<bit_vec> parity_check;
    std::vector<std::uint64_t> hcols;    // syndrome contribution of each coordinate
    std::vector<std::uint64_t> leaders;  // indexed by syndrome, bit i = coordinate i

    std::uint64_t syndrome(std::uint64_t word) const {
        std::uint64_t s = 0;
        while (word) {
            s ^= hcols[static_cast<std::size_t>(std::countr_zero(word))];
            word &= word - 1;
        }
        return s;
    }
};

/// Coset leaders: minimal weight, then lexicographically first reading coordinate 0 first.
inline syndrome_table build_syndrome_table(const binary_code& code) {
    std::size_t n = code.length();
    if (n > 64) throw feasibility_error("build_syndrome_table: length above 64");
    if (n - code.dim() > 24) throw feasibility_error("build_syndrome_table: redundancy above 24");
    syndrome_table t;
    t.n = n;
    t.parity_check = code.parity_check();
    t.hcols = generator_columns(t.parity_check, n);
    std::size_t cosets = std::size_t{1} << t.parity_check.size();
    t.leaders.assign(cosets, 0);
    std::vector<char> filled(cosets, 0);
    filled[0] = 1;
    std::size_t remaining = cosets - 1;
    for (std::size_t w = 1; w <= n && remaining; ++w) {
        // v: weight-w value where coordinate i carries place value 2^(n-1-i); ascending v = string order
        std::uint64_t v = low_mask(w);
        for (;;) {
            std::uint64_t word = 0;
            for (std::uint64_t x = v; x; x &= x - 1) word |= std::uint64_t{1} << (n - 1 - static_cast<std::size_t>(std::countr_zero(x)));
            std::uint64_t s = t.syndrome(word);
            if (!filled[s]) {
                filled[s] = 1;
                t.leaders[s] = word;
                if (!--remaining) break;
            }
            std::uint64_t c = v & (~v + 1), r = v + c;
            if (r == 0) break;
            std::uint64_t next = (((r ^ v) >> 2) / c) | r;
            if (n < 64 && (next >> n)) break;
            v = next;
        }
    }
    return t;
}

// ---- BSC extrinsic bit-MAP ----------------------------------------------

/// Extrinsic bit-MAP decoder for one coordinate over BSC(p). Decoding runs on the coset
/// structure of the code punctured at the target; the target is read off through a dual
/// codeword with a 1 at the target. Ties decide 0 in the coset-leader frame, so whether
/// the output is wrong depends only on the noise.
class bsc_extrinsic_decoder {
public:
    bsc_extrinsic_decoder(const binary_code& code, std::size_t target, double p) : n_(code.length()), target_(target), p_(p) {
        check_target(code, target);
        require(p >= 0.0 && p < 0.5, "bsc extrinsic decoder: need 0 <= p < 1/2");
        if (n_ > 64) throw feasibility_error("bsc extrinsic decoder: length above 64");
        std::vector<std::size_t> others;
        for (std::size_t j = 0; j < n_; ++j)
            if (j != target) others.push_back(j);
        punctured_ = project(code, others);
        table_ = build_syndrome_table(punctured_);
        for (const auto& hrow : code.parity_check())
            if (hrow.get(target)) {
                phi_ = remove_bit(hrow.word0(), target);
                determined_ = true;
                break;
            }
        decide_one_.assign(table_.leaders.size(), 0);
        if (!determined_) return;
        if (punctured_.dim() > 24) throw feasibility_error("bsc extrinsic decoder: dimension above 24");
        auto cws = codewords(punctured_);
        std::size_t m = n_ - 1;
        std::vector<long double> pw(m + 1);
        for (std::size_t w = 0; w <= m; ++w)
            pw[w] = std::pow(static_cast<long double>(p), static_cast<long double>(w)) *
                    std::pow(1.0L - p, static_cast<long double>(m - w));
        std::vector<std::int64_t> diff(m + 1);
        for (std::size_t s = 0; s < table_.leaders.size(); ++s) {
            std::fill(diff.begin(), diff.end(), 0);
            for (auto u : cws) diff[std::popcount(table_.leaders[s] ^ u)] += parity(phi_ & u) ? 1 : -1;
            long double margin = 0;
            for (std::size_t w = 0; w <= m; ++w) margin += diff[w] * pw[w];
            decide_one_[s] = margin > 0;
        }
    }

    std::size_t length() const { return n_; }
    std::size_t target() const { return target_; }
    double p() const { return p_; }
    bool target_determined() const { return determined_; }
    const syndrome_table& table() const { return table_; }
    const binary_code& punctured() const { return punctured_; }

    /// Decision from the received word (bit i = coordinate i); the target bit is ignored.
    int decode_word(std::uint64_t received) const {
        std::uint64_t y = remove_bit(received, target_);
        std::uint64_t s = table_.syndrome(y);
        return static_cast<int>(parity(phi_ & (y ^ table_.leaders[s])) ^ decide_one_[s]);
    }
    int decode(const bit_vec& received) const {
        if (received.size() != n_) throw parameter_error("decode: received length");
        return decode_word(received.word0());
    }
    /// 1 iff the decision is wrong when the noise word is z (target bit ignored).
    int error_indicator(std::uint64_t z) const { return decode_word(z); }

private:
    std::size_t n_, target_;
    double p_;
    binary_code punctured_;
    syndrome_table table_;
    std::uint64_t phi_ = 0;
    bool determined_ = false;
    std::vector<char> decide_one_;
};

inline int bsc_extrinsic_bitmap(const bsc_extrinsic_decoder& dec, const bit_vec& received) { return dec.decode(received); }

/// Reference bit-MAP by splitting codeword likelihoods on the target value; ties decide 0.
inline int bsc_bitmap_by_likelihood(const binary_code& code, double p, std::uint64_t received, std::size_t target) {
    check_target(code, target);
    std::uint64_t mask = low_mask(code.length()) & ~(std::uint64_t{1} << target);
    std::size_t m = code.length() - 1;
    std::vector<std::int64_t> diff(m + 1, 0);
    for (auto c : codewords(code)) diff[std::popcount((c ^ received) & mask)] += ((c >> target) & 1U) ? 1 : -1;
    long double margin = 0;
    for (std::size_t w = 0; w <= m; ++w)
        margin += diff[w] * std::pow(static_cast<long double>(p), static_cast<long double>(w)) *
                  std::pow(1.0L - p, static_cast<long double>(m - w));
    return margin > 0;
}

// ---- BMS conditional mean -------------------------------------------------

/// E[X_target | Y_others] with BPSK x = (-1)^c; observation has one entry per coordinate,
/// the target entry is ignored. Returns 0 for an observation of probability zero.
inline double bms_conditional_mean(const binary_code& code, const channel_model& ch, const std::vector<double>& observation,
                                   std::size_t target) {
    check_target(code, target);
    if (observation.size() != code.length()) throw parameter_error("bms_conditional_mean: observation length");
    std::size_t n = code.length();
    std::vector<double> like_plus(n), like_minus(n);
    for (std::size_t i = 0; i < n; ++i) {
        like_plus[i] = ch.prob(observation[i]);
        like_minus[i] = ch.prob(-observation[i]);
    }
    long double l0 = 0, l1 = 0;
    for (auto c : codewords(code)) {
        long double l = 1;
        for (std::size_t i = 0; i < n && l != 0; ++i)
            if (i != target) l *= ((c >> i) & 1U) ? like_minus[i] : like_plus[i];
        (((c >> target) & 1U) ? l1 : l0) += l;
    }
    if (l0 + l1 == 0) return 0.0;
    return static_cast<double>((l0 - l1) / (l0 + l1));
}

// ---- majority ------------------------------------------------------------

inline int majority3(int a, int b, int c) { return (a + b + c) >= 2 ? 1 : 0; }

/// Pointwise Majority(a,b,c) <= ab + ac + bc.
inline bool majority_union_holds(int a, int b, int c) { return majority3(a, b, c) <= a * b + a * c + b * c; }

// ---- metrics -------------------------------------------------------------

enum class metrics_mode { exact, monte_carlo };

struct mc_options {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

struct extrinsic_metrics {
    std::optional<double> pe;  // BEC only
    double pb = 0, mmse = 0, ber = 0, cond_entropy = 0;
    double mean_g = 0, mean_g2 = 0;
    metrics_mode mode = metrics_mode::exact;
    std::uint64_t samples = 0;
    // 99% half-widths, zero in exact mode
    double pe_hw = 0, pb_hw = 0, mmse_hw = 0, ber_hw = 0, cond_entropy_hw = 0;
    // standard errors, zero in exact mode
    double pe_se = 0, pb_se = 0, mmse_se = 0, ber_se = 0, cond_entropy_se = 0;
};

namespace detail {

// Per-observation accumulation of the metric integrands.
struct metric_sums {
    long double w = 0, pe = 0, pb = 0, g = 0, g2 = 0, ber = 0, h = 0;
    long double pe2 = 0, pb2 = 0, g2sq = 0, ber2 = 0, h2sq = 0;

    void add(long double weight, double gval, double pe_ind, double pb_ind) {
        double ber_v = (1.0 - std::abs(gval)) / 2.0;
        double h_v = h2((1.0 - gval) / 2.0);
        w += weight;
        pe += weight * pe_ind;
        pb += weight * pb_ind;
        g += weight * gval;
        g2 += weight * gval * gval;
        ber += weight * ber_v;
        h += weight * h_v;
        pe2 += weight * pe_ind * pe_ind;
        pb2 += weight * pb_ind * pb_ind;
        g2sq += weight * gval * gval * gval * gval;
        ber2 += weight * ber_v * ber_v;
        h2sq += weight * h_v * h_v;
    }
    void merge(const metric_sums& o) {
        w += o.w; pe += o.pe; pb += o.pb; g += o.g; g2 += o.g2; ber += o.ber; h += o.h;
        pe2 += o.pe2; pb2 += o.pb2; g2sq += o.g2sq; ber2 += o.ber2; h2sq += o.h2sq;
    }
};

inline extrinsic_metrics finish(const metric_sums& s, bool with_pe, metrics_mode mode, std::uint64_t samples) {
    extrinsic_metrics m;
    m.mode = mode;
    m.samples = samples;
    long double w = s.w;
    if (with_pe) m.pe = static_cast<double>(s.pe / w);
    m.pb = static_cast<double>(s.pb / w);
    m.mean_g = static_cast<double>(s.g / w);
    m.mean_g2 = static_cast<double>(s.g2 / w);
    m.mmse = 1.0 - m.mean_g2;
    m.ber = static_cast<double>(s.ber / w);
    m.cond_entropy = static_cast<double>(s.h / w);
    if (mode == metrics_mode::monte_carlo) {
        const double z99 = 2.5758293035489004;
        auto se = [&](long double sum, long double sumsq) {
            long double mean = sum / w, var = sumsq / w - mean * mean;
            if (var < 0) var = 0;
            return static_cast<double>(std::sqrt(var * w / (w - 1)) / std::sqrt(w));
        };
        m.pe_se = with_pe ? se(s.pe, s.pe2) : 0.0;
        m.pb_se = se(s.pb, s.pb2);
        m.mmse_se = se(s.g2, s.g2sq);
        m.ber_se = se(s.ber, s.ber2);
        m.cond_entropy_se = se(s.h, s.h2sq);
        m.pe_hw = z99 * m.pe_se;
        m.pb_hw = z99 * m.pb_se;
        m.mmse_hw = z99 * m.mmse_se;
        m.ber_hw = z99 * m.ber_se;
        m.cond_entropy_hw = z99 * m.cond_entropy_se;
    }
    return m;
}

// Sign-modulated conditional mean for a noise tuple z (all-zero codeword sent).
struct posterior_engine {
    const binary_code& code;
    const channel_model& ch;
    std::size_t target;
    std::vector<std::uint64_t> cws;

    posterior_engine(const binary_code& c, const channel_model& chan, std::size_t t)
        : code(c), ch(chan), target(t), cws(codewords(c)) {}

    // BSC: z as an error word
    double g_bsc(std::uint64_t z, const std::vector<long double>& pw) const {
        std::uint64_t mask = low_mask(code.length()) & ~(std::uint64_t{1} << target);
        long double l0 = 0, l1 = 0;
        for (auto c : cws) (((c >> target) & 1U) ? l1 : l0) += pw[std::popcount((c ^ z) & mask)];
        return static_cast<double>((l0 - l1) / (l0 + l1));
    }
    // general law: z as symbol values
    double g_symbols(const std::vector<double>& z) const { return bms_conditional_mean(code, ch, z, target); }
};

// Hard decision from a conditional mean: ties count as half an error.
inline double soft_error(double g) { return g < 0 ? 1.0 : (g > 0 ? 0.0 : 0.5); }

}  // namespace detail

inline std::vector<long double> bsc_weight_powers(double p, std::size_t m) {
    std::vector<long double> pw(m + 1);
    for (std::size_t w = 0; w <= m; ++w)
        pw[w] = std::pow(static_cast<long double>(p), static_cast<long double>(w)) *
                std::pow(1.0L - p, static_cast<long double>(m - w));
    return pw;
}

/// Exact extrinsic metrics with the all-zero codeword sent.
inline extrinsic_metrics extrinsic_metrics_exact(const binary_code& code, const channel_model& ch, std::size_t target = 0) {
    check_target(code, target);
    std::size_t n = code.length(), m = n - 1;
    if (n > 64) throw feasibility_error("exact metrics: length above 64");
    if (ch.kind() == channel_kind::bec) {
        double pe = bec_exact_pe(code, target, ch.p());
        extrinsic_metrics r;
        r.pe = pe;
        r.pb = pe / 2;
        r.mmse = pe;
        r.ber = pe / 2;
        r.cond_entropy = pe;
        r.mean_g = r.mean_g2 = 1.0 - pe;
        return r;
    }
    if (code.dim() > 24) throw feasibility_error("exact metrics: dimension above 24");
    detail::posterior_engine eng(code, ch, target);
    detail::metric_sums sums;
    if (ch.kind() == channel_kind::bsc) {
        if (m > 24) throw feasibility_error("exact metrics: more than 2^24 noise patterns");
        double p = ch.p();
        auto pw = bsc_weight_powers(p, m);
        std::optional<bsc_extrinsic_decoder> dec;
        if (p < 0.5) dec.emplace(code, target, p);
        for (std::uint64_t zz = 0; zz < (std::uint64_t{1} << m); ++zz) {
            std::uint64_t z = 0;
            // re-insert a zero at the target position
            z = (zz & ((std::uint64_t{1} << target) - 1)) | ((zz >> target) << (target + 1));
            double g = eng.g_bsc(z, pw);
            double pb = dec && dec->target_determined() ? dec->error_indicator(z) : detail::soft_error(g);
            sums.add(pw[std::popcount(zz)], g, 0.0, pb);
        }
        return detail::finish(sums, false, metrics_mode::exact, 0);
    }
    // general finite law: enumerate symbol tuples
    const auto& law = ch.symbols();
    std::size_t a = law.size();
    long double total = std::pow(static_cast<long double>(a), static_cast<long double>(m));
    if (total > static_cast<long double>(std::uint64_t{1} << 24))
        throw feasibility_error("exact metrics: more than 2^24 symbol tuples");
    std::vector<std::size_t> digit(m, 0);
    std::vector<double> z(n, 1.0);
    for (;;) {
        long double w = 1;
        for (std::size_t i = 0, j = 0; i < n; ++i) {
            if (i == target) continue;
            z[i] = law[digit[j]].value;
            w *= law[digit[j]].prob;
            ++j;
        }
        if (w > 0) {
            double g = eng.g_symbols(z);
            sums.add(w, g, 0.0, detail::soft_error(g));
        }
        std::size_t j = 0;
        while (j < m && ++digit[j] == a) digit[j++] = 0;
        if (j == m) break;
    }
    return detail::finish(sums, false, metrics_mode::exact, 0);
}

/// Runs f(sample_index, rng) over [0, samples) in fixed blocks; block sums are merged in
/// block order, so the result does not depend on the number of workers.
template <class Acc, class Fn>
Acc run_blocks(std::uint64_t samples, std::uint64_t seed, unsigned workers, Fn&& f) {
    constexpr std::uint64_t block = 4096;
    std::uint64_t nblocks = (samples + block - 1) / block;
    std::vector<Acc> parts(nblocks);
    workers = std::max(1U, workers);
    auto work = [&](unsigned w) {
        for (std::uint64_t b = w; b < nblocks; b += workers) {
            Acc acc{};
            std::uint64_t end = std::min(samples, (b + 1) * block);
            for (std::uint64_t i = b * block; i < end; ++i) {
                counter_rng rng(seed, i);
                f(acc, rng);
            }
            parts[b] = acc;
        }
    };
    if (workers == 1) work(0);
    else {
        std::vector<std::thread> th;
        for (unsigned w = 0; w < workers; ++w) th.emplace_back(work, w);
        for (auto& t : th) t.join();
    }
    Acc total{};
    for (auto& a : parts) total.merge(a);
    return total;
}

/// Monte Carlo extrinsic metrics with the all-zero codeword sent.
inline extrinsic_metrics extrinsic_metrics_mc(const binary_code& code, const channel_model& ch, std::size_t target,
                                              const mc_options& opt) {
    check_target(code, target);
    require(opt.samples >= 2, "mc metrics: need at least 2 samples");
    std::size_t n = code.length();
    if (n > 64) throw feasibility_error("mc metrics: length above 64");
    if (ch.kind() == channel_kind::bec) {
        auto g = generator_columns(code.rows(), n);
        auto sums = run_blocks<detail::metric_sums>(opt.samples, opt.seed, opt.workers, [&](detail::metric_sums& acc, counter_rng& rng) {
            xor_basis b;
            for (std::size_t j = 0; j < n; ++j)
                if (j != target && !rng.bernoulli(ch.p())) b.insert(g[j]);
            bool rec = b.reduce(g[target]) == 0;
            acc.add(1, rec ? 1.0 : 0.0, rec ? 0.0 : 1.0, rec ? 0.0 : 0.5);
        });
        return detail::finish(sums, true, metrics_mode::monte_carlo, opt.samples);
    }
    if (code.dim() > 24) throw feasibility_error("mc metrics: dimension above 24");
    detail::posterior_engine eng(code, ch, target);
    if (ch.kind() == channel_kind::bsc) {
        double p = ch.p();
        auto pw = bsc_weight_powers(p, n - 1);
        std::optional<bsc_extrinsic_decoder> dec;
        if (p < 0.5) dec.emplace(code, target, p);
        auto sums = run_blocks<detail::metric_sums>(opt.samples, opt.seed, opt.workers, [&](detail::metric_sums& acc, counter_rng& rng) {
            std::uint64_t z = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != target && rng.bernoulli(p)) z |= std::uint64_t{1} << j;
            double g = eng.g_bsc(z, pw);
            double pb = dec && dec->target_determined() ? dec->error_indicator(z) : detail::soft_error(g);
            acc.add(1, g, 0.0, pb);
        });
        return detail::finish(sums, false, metrics_mode::monte_carlo, opt.samples);
    }
    auto sums = run_blocks<detail::metric_sums>(opt.samples, opt.seed, opt.workers, [&](detail::metric_sums& acc, counter_rng& rng) {
        std::vector<double> z(n, 1.0);
        for (std::size_t j = 0; j < n; ++j)
            if (j != target) z[j] = ch.sample_noise(rng);
        double g = eng.g_symbols(z);
        acc.add(1, g, 0.0, detail::soft_error(g));
    });
    return detail::finish(sums, false, metrics_mode::monte_carlo, opt.samples);
}

inline extrinsic_metrics extrinsic_metrics_for(const binary_code& code, const channel_model& ch, std::size_t target,
                                               metrics_mode mode, const mc_options& opt = {}) {
    return mode == metrics_mode::exact ? extrinsic_metrics_exact(code, ch, target) : extrinsic_metrics_mc(code, ch, target, opt);
}

// ---- multi-look decoding --------------------------------------------------

/// Majority of three extrinsic decisions taken on equal projected codes.
class multi_look_decoder {
public:
    multi_look_decoder(const binary_code& code, const look_family& looks, const channel_model& ch, std::size_t target = 0)
        : ch_(ch), target_(target) {
        check_target(code, target);
        if (looks.looks.size() != 3) throw parameter_error("multi_look_decode: exactly 3 looks required");
        for (const auto& look : looks.looks) {
            std::vector<std::size_t> coords = look;
            if (std::find(coords.begin(), coords.end(), target) == coords.end()) coords.push_back(target);
            std::sort(coords.begin(), coords.end());
            for (auto c : coords)
                if (c >= code.length()) throw parameter_error("multi_look_decode: look index outside code");
            auto pc = project(code, coords);
            if (!projected_.empty() && !codes_equal(projected_.front(), pc))
                throw structure_error("multi_look_decode: look projections differ");
            local_target_ = static_cast<std::size_t>(std::find(coords.begin(), coords.end(), target) - coords.begin());
            projected_.push_back(pc);
            coords_.push_back(std::move(coords));
        }
        if (ch.kind() == channel_kind::bsc) bsc_.emplace(projected_.front(), local_target_, ch.p());
    }

    /// Per-look decisions from a received word (BSC).
    std::array<int, 3> look_decisions(std::uint64_t received) const {
        if (!bsc_) throw parameter_error("multi_look_decode: bit observations need a BSC");
        std::array<int, 3> d{};
        for (std::size_t l = 0; l < 3; ++l) {
            std::uint64_t y = 0;
            for (std::size_t i = 0; i < coords_[l].size(); ++i)
                if ((received >> coords_[l][i]) & 1U) y |= std::uint64_t{1} << i;
            d[l] = bsc_->decode_word(y);
        }
        return d;
    }
    /// Per-look hard decisions from symbol observations (any channel).
    std::array<int, 3> look_decisions(const std::vector<double>& obs) const {
        std::array<int, 3> d{};
        for (std::size_t l = 0; l < 3; ++l) {
            std::vector<double> y(coords_[l].size());
            for (std::size_t i = 0; i < y.size(); ++i) y[i] = obs.at(coords_[l][i]);
            d[l] = bms_conditional_mean(projected_[l], ch_, y, local_target_) < 0 ? 1 : 0;
        }
        return d;
    }
    int decode(std::uint64_t received) const {
        auto d = look_decisions(received);
        return majority3(d[0], d[1], d[2]);
    }
    int decode(const std::vector<double>& obs) const {
        auto d = look_decisions(obs);
        return majority3(d[0], d[1], d[2]);
    }
    const binary_code& projected_code() const { return projected_.front(); }

private:
    channel_model ch_;
    std::size_t target_, local_target_ = 0;
    std::vector<binary_code> projected_;
    std::vector<std::vector<std::size_t>> coords_;
    std::optional<bsc_extrinsic_decoder> bsc_;
};

inline int multi_look_decode(const binary_code& code, const look_family& looks, const channel_model& ch,
                             const bit_vec& received, std::size_t target = 0) {
    return multi_look_decoder(code, looks, ch, target).decode(received.word0());
}

}  // namespace rmnest
