#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <vector>

#include "rmnest/bounds.hpp"
#include "rmnest/channels.hpp"
#include "rmnest/codes.hpp"
#include "rmnest/decoders.hpp"
#include "rmnest/errors.hpp"
#include "rmnest/fourier.hpp"
#include "rmnest/rng.hpp"
#include "rmnest/subspaces.hpp"

namespace rmnest {

// ---- enumeration helpers ----------------------------------------------------------

/// Calls fn(weight, z) for every noise tuple with positive probability; z has one entry per
/// coordinate and coordinates in `skip` (mask) stay at +1.
inline void for_each_noise(const channel_model& ch, std::size_t n, std::uint64_t skip,
                           const std::function<void(long double, const std::vector<double>&)>& fn) {
    std::vector<noise_symbol> law;
    for (const auto& s : ch.symbols())
        if (s.prob > 0) law.push_back(s);
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i)
        if (!((skip >> i) & 1U)) free.push_back(i);
    long double total = std::pow(static_cast<long double>(law.size()), static_cast<long double>(free.size()));
    if (total > static_cast<long double>(std::uint64_t{1} << 24)) throw feasibility_error("enumeration above 2^24 noise tuples");
    std::vector<std::size_t> digit(free.size(), 0);
    std::vector<double> z(n, 1.0);
    for (;;) {
        long double w = 1;
        for (std::size_t j = 0; j < free.size(); ++j) {
            z[free[j]] = law[digit[j]].value;
            w *= law[digit[j]].prob;
        }
        fn(w, z);
        std::size_t j = 0;
        while (j < free.size() && ++digit[j] == law.size()) digit[j++] = 0;
        if (j == free.size()) break;
    }
}

/// I(X;Y) in bits for a uniformly chosen codeword sent over n uses of ch.
inline double code_mutual_information(const binary_code& code, const channel_model& ch) {
    if (code.dim() > 24) throw feasibility_error("mutual information: dimension above 24");
    auto cws = codewords(code);
    std::size_t n = code.length();
    long double cond = 0;  // H(X|Y), all-zero codeword sent
    for_each_noise(ch, n, 0, [&](long double w, const std::vector<double>& z) {
        std::vector<long double> like;
        like.reserve(cws.size());
        long double sum = 0;
        for (auto c : cws) {
            long double l = 1;
            for (std::size_t i = 0; i < n && l != 0; ++i) l *= ch.prob(((c >> i) & 1U) ? -z[i] : z[i]);
            like.push_back(l);
            sum += l;
        }
        long double h = 0;
        for (auto l : like)
            if (l > 0) h -= (l / sum) * std::log2(l / sum);
        cond += w * h;
    });
    return static_cast<double>(code.dim()) - static_cast<double>(cond);
}

// ---- EXIT curve ---------------------------------------------------------------------

struct exit_point {
    double t = 0;
    double h_ext = 0;   // H(X_0 | Y_{~0}(t))
    double h_full = 0;  // H(X_0 | Y_0, Y_{~0}(t))
    double value = 0;   // I(X_0; Y_0 | Y_{~0}(t))
};

/// Y_0 from the base channel, the other outputs through the base channel followed by erasures.
inline exit_point exit_value(const binary_code& code, const channel_model& base, double t, std::size_t target = 0) {
    check_target(code, target);
    if (code.dim() > 24) throw feasibility_error("exit curve: dimension above 24");
    auto cascade = erasure_cascade(base, t);
    auto cws = codewords(code);
    std::size_t n = code.length();
    long double he = 0, hf = 0;
    std::vector<noise_symbol> own;
    for (const auto& s : base.symbols())
        if (s.prob > 0) own.push_back(s);
    for_each_noise(cascade, n, std::uint64_t{1} << target, [&](long double w, const std::vector<double>& z) {
        long double l0 = 0, l1 = 0;
        for (auto c : cws) {
            long double l = 1;
            for (std::size_t i = 0; i < n && l != 0; ++i)
                if (i != target) l *= cascade.prob(((c >> i) & 1U) ? -z[i] : z[i]);
            (((c >> target) & 1U) ? l1 : l0) += l;
        }
        long double tot = l0 + l1;
        if (tot == 0) return;
        double q = static_cast<double>(l1 / tot);
        he += w * h2(q);
        for (const auto& s : own) {
            long double a = l0 * base.prob(s.value), b = l1 * base.prob(-s.value);
            if (a + b == 0) continue;
            hf += w * s.prob * h2(static_cast<double>(b / (a + b)));
        }
    });
    exit_point e;
    e.t = t;
    e.h_ext = static_cast<double>(he);
    e.h_full = static_cast<double>(hf);
    e.value = std::clamp(e.h_ext - e.h_full, 0.0, 1.0);
    return e;
}

/// Composite Simpson rule on a uniform grid over [a,b]; needs an odd number of points.
inline double simpson(const std::vector<double>& f, double a, double b) {
    require(f.size() >= 3 && f.size() % 2 == 1, "simpson: need an odd number of at least 3 points");
    double h = (b - a) / static_cast<double>(f.size() - 1);
    double s = f.front() + f.back();
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
    return s * h / 3.0;
}

/// Generates the group from the given automorphisms and reports whether coordinate 0 reaches
/// every coordinate.
inline bool orbit_is_transitive(std::size_t n, const std::vector<std::vector<std::size_t>>& gens) {
    std::vector<char> seen(n, 0);
    std::deque<std::size_t> q{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
        std::size_t x = q.front();
        q.pop_front();
        for (const auto& g : gens)
            if (!seen[g[x]]) {
                seen[g[x]] = 1;
                ++count;
                q.push_back(g[x]);
            }
    }
    return count == n;
}

/// Spot check with cyclic shift and, for power-of-two lengths, the xor translations.
inline bool transitivity_check(const binary_code& code) {
    std::size_t n = code.length();
    std::vector<std::vector<std::size_t>> cand, autos;
    std::vector<std::size_t> shift(n);
    for (std::size_t i = 0; i < n; ++i) shift[i] = (i + 1) % n;
    cand.push_back(shift);
    if (std::has_single_bit(n))
        for (std::size_t b = 1; b < n; b <<= 1) {
            std::vector<std::size_t> tr(n);
            for (std::size_t i = 0; i < n; ++i) tr[i] = i ^ b;
            cand.push_back(std::move(tr));
        }
    for (auto& g : cand)
        if (is_automorphism(code, g)) autos.push_back(std::move(g));
    return orbit_is_transitive(n, autos);
}

struct exit_curve_t {
    std::vector<double> grid, exit_values, h_ext;
    double area = 0, mutual_info_per_bit = 0;
    bool transitive = false;
    double gap() const { return std::abs(area - mutual_info_per_bit); }
};

inline exit_curve_t exit_curve(const binary_code& code, const channel_model& base, std::size_t grid_points = 201) {
    require(grid_points >= 3 && grid_points % 2 == 1, "exit curve: grid needs an odd number of at least 3 points");
    exit_curve_t c;
    c.transitive = transitivity_check(code);
    for (std::size_t i = 0; i < grid_points; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(grid_points - 1);
        auto e = exit_value(code, base, t);
        c.grid.push_back(t);
        c.exit_values.push_back(e.value);
        c.h_ext.push_back(e.h_ext);
    }
    c.area = simpson(c.exit_values, 0.0, 1.0);
    c.mutual_info_per_bit = code_mutual_information(code, base) / static_cast<double>(code.length());
    return c;
}

// ---- block error and the transition midpoint --------------------------------------

struct rate_estimate {
    double value = 0, std_error = 0;
    std::uint64_t samples = 0;
    double half_width() const { return 2.5758293035489004 * std_error; }
};

namespace detail {
struct count_acc {
    std::uint64_t n = 0, hits = 0;
    void merge(const count_acc& o) { n += o.n; hits += o.hits; }
};
inline rate_estimate to_estimate(const count_acc& a) {
    double ph = static_cast<double>(a.hits) / static_cast<double>(a.n);
    return {ph, std::sqrt(ph * (1 - ph) / static_cast<double>(a.n)), a.n};
}
}  // namespace detail

/// Block error of the lexicographic syndrome decoder over BSC(p), all-zero codeword sent.
inline rate_estimate block_error_mc(const syndrome_table& table, double p, std::uint64_t samples, std::uint64_t seed,
                                    unsigned workers = 1) {
    require(samples >= 1, "block error: need samples");
    std::size_t n = table.n;
    auto acc = run_blocks<detail::count_acc>(samples, seed, workers, [&](detail::count_acc& a, counter_rng& rng) {
        std::uint64_t z = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (rng.bernoulli(p)) z |= std::uint64_t{1} << i;
        ++a.n;
        a.hits += table.leaders[table.syndrome(z)] != z;
    });
    return detail::to_estimate(acc);
}

/// Exact block error of the same decoder (n <= 24).
inline double block_error_exact(const syndrome_table& table, double p) {
    if (table.n > 24) throw feasibility_error("block error: length above 24");
    std::vector<double> ok_by_weight(table.n + 1, 0.0);
    for (auto leader : table.leaders) ok_by_weight[std::popcount(leader)] += 1;
    double ok = 0;
    for (std::size_t w = 0; w <= table.n; ++w)
        ok += ok_by_weight[w] * std::pow(p, static_cast<double>(w)) * std::pow(1 - p, static_cast<double>(table.n - w));
    return 1 - ok;
}

struct theta_estimate {
    double theta = 0;
    double bracket = 0;       // final bisection interval width
    double last_std_error = 0;
    unsigned probes = 0;
};

/// Bisection on B(p) = 1/2 over (0, 1/2] with `samples` per probe; probe i uses seed + i.
inline theta_estimate theta_bisection(const std::function<rate_estimate(double, std::uint64_t)>& block_error, std::uint64_t seed,
                                      double tol = 1e-3) {
    double lo = 0.0, hi = 0.5;
    theta_estimate out;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        auto b = block_error(mid, seed + out.probes);
        ++out.probes;
        out.last_std_error = b.std_error;
        (b.value < 0.5 ? lo : hi) = mid;
    }
    out.theta = 0.5 * (lo + hi);
    out.bracket = hi - lo;
    return out;
}

inline theta_estimate theta_bisection_mc(const binary_code& code, std::uint64_t samples, std::uint64_t seed, double tol = 1e-3,
                                         unsigned workers = 1) {
    auto table = build_syndrome_table(code);
    return theta_bisection([&](double p, std::uint64_t s) { return block_error_mc(table, p, samples, s, workers); }, seed, tol);
}

// ---- look and list-ball experiments -----------------------------------------------

struct three_look_result {
    double single_error = 0, single_std_error = 0;  // averaged over the three looks
    double majority_error = 0, majority_std_error = 0;
    double rho = 0, bound = 0;
    std::uint64_t samples = 0;
    bool pass = false;
};

/// Monte Carlo of the three-look majority decoder over BSC(p) with the all-zero codeword.
inline three_look_result three_look_experiment(const binary_code& code, const look_family& looks, double p, std::uint64_t samples,
                                               std::uint64_t seed, unsigned workers = 1) {
    auto ch = channel_model::bsc(p);
    multi_look_decoder dec(code, looks, ch, 0);
    std::size_t n = code.length();
    if (n > 64) throw feasibility_error("three-look experiment: length above 64");
    struct acc_t {
        std::uint64_t n = 0, single = 0, maj = 0;
        void merge(const acc_t& o) { n += o.n; single += o.single; maj += o.maj; }
    };
    auto acc = run_blocks<acc_t>(samples, seed, workers, [&](acc_t& a, counter_rng& rng) {
        std::uint64_t z = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (rng.bernoulli(p)) z |= std::uint64_t{1} << i;
        auto d = dec.look_decisions(z);
        ++a.n;
        a.single += static_cast<std::uint64_t>(d[0] + d[1] + d[2]);
        a.maj += static_cast<std::uint64_t>(majority3(d[0], d[1], d[2]));
    });
    three_look_result r;
    r.samples = acc.n;
    double ns = static_cast<double>(acc.n);
    r.single_error = static_cast<double>(acc.single) / (3 * ns);
    r.single_std_error = std::sqrt(r.single_error * (1 - r.single_error) / (3 * ns));
    r.majority_error = static_cast<double>(acc.maj) / ns;
    r.majority_std_error = std::sqrt(r.majority_error * (1 - r.majority_error) / ns);
    r.rho = static_cast<double>(looks.pairwise_overlap);
    r.bound = bsc_three_look(r.single_error, r.rho);
    r.pass = r.majority_error <= r.bound + 3 * r.majority_std_error;
    return r;
}

struct list_ball_result {
    double q_hat = 0;            // measured per-bit error rate
    double radius = 0;           // sqrt(q_hat)
    double far_prob = 0, far_std_error = 0;  // Pr(Delta >= radius)
    std::uint64_t samples = 0;
    bool pass = false;
};

/// Per-bit extrinsic decisions over BSC(p) collected into a candidate word; Delta is its
/// relative distance from the all-zero codeword.
inline list_ball_result list_ball_experiment(const binary_code& code, double p, std::uint64_t samples, std::uint64_t seed,
                                             unsigned workers = 1) {
    std::size_t n = code.length();
    if (n > 64) throw feasibility_error("list-ball experiment: length above 64");
    std::vector<bsc_extrinsic_decoder> decs;
    for (std::size_t i = 0; i < n; ++i) decs.emplace_back(code, i, p);
    struct acc_t {
        std::uint64_t n = 0, bit_errors = 0;
        std::vector<std::uint64_t> by_count;
        void merge(const acc_t& o) {
            n += o.n;
            bit_errors += o.bit_errors;
            if (by_count.size() < o.by_count.size()) by_count.resize(o.by_count.size(), 0);
            for (std::size_t i = 0; i < o.by_count.size(); ++i) by_count[i] += o.by_count[i];
        }
    };
    auto acc = run_blocks<acc_t>(samples, seed, workers, [&](acc_t& a, counter_rng& rng) {
        if (a.by_count.empty()) a.by_count.assign(n + 1, 0);
        std::uint64_t z = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (rng.bernoulli(p)) z |= std::uint64_t{1} << i;
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < n; ++i) wrong += static_cast<std::size_t>(decs[i].decode_word(z));
        ++a.n;
        a.bit_errors += wrong;
        ++a.by_count[wrong];
    });
    list_ball_result r;
    r.samples = acc.n;
    double ns = static_cast<double>(acc.n);
    r.q_hat = static_cast<double>(acc.bit_errors) / (ns * static_cast<double>(n));
    r.radius = std::sqrt(r.q_hat);
    std::uint64_t far = 0;
    for (std::size_t w = 0; w < acc.by_count.size(); ++w)
        if (static_cast<double>(w) / static_cast<double>(n) >= r.radius) far += acc.by_count[w];
    r.far_prob = static_cast<double>(far) / ns;
    r.far_std_error = std::sqrt(r.far_prob * (1 - r.far_prob) / ns);
    r.pass = r.far_prob <= list_ball_bound(r.q_hat).prob_bound + 3 * r.far_std_error;
    return r;
}

// ---- extrinsic indicators as boolean functions ---------------------------------

/// Error indicator of extrinsic decoding as a function of the N-1 non-target noise bits
/// (x_i = 1: erased for the BEC, flipped for the BSC) under the i.i.d. bias p.
inline boolean_fn extrinsic_indicator(const binary_code& code, const channel_model& ch, std::size_t target = 0) {
    check_target(code, target);
    std::size_t n = code.length(), m = n - 1;
    if (m > 24) throw feasibility_error("extrinsic indicator: more than 24 variables");
    require(ch.kind() != channel_kind::bms, "extrinsic indicator: needs a BEC or BSC");
    std::vector<double> table(std::size_t{1} << m);
    if (ch.kind() == channel_kind::bec) {
        auto cols = generator_columns(code.rows(), n);
        for (std::uint64_t x = 0; x < table.size(); ++x) {
            xor_basis b;
            for (std::size_t i = 0, j = 0; i < n; ++i) {
                if (i == target) continue;
                if (!((x >> j++) & 1U)) b.insert(cols[i]);
            }
            table[x] = b.reduce(cols[target]) != 0 ? 1.0 : 0.0;
        }
    } else {
        bsc_extrinsic_decoder dec(code, target, ch.p());
        for (std::uint64_t x = 0; x < table.size(); ++x) {
            std::uint64_t z = (x & ((std::uint64_t{1} << target) - 1)) | ((x >> target) << (target + 1));
            table[x] = dec.error_indicator(z);
        }
    }
    return boolean_fn(static_cast<unsigned>(m), std::move(table), ch.p());
}

}  // namespace rmnest
