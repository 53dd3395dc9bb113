#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "rmnest/bounds.hpp"
#include "rmnest/commands.hpp"
#include "rmnest/decoders.hpp"
#include "rmnest/fourier.hpp"
#include "rmnest/harness.hpp"
#include "rmnest/subspaces.hpp"

namespace rmnest::acceptance {

struct outcome {
    bool pass = false;
    std::string detail;
};

struct criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<outcome()> run;
};

struct result {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0, budget = 0;
};

inline std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

inline std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

// 1
inline outcome rate_lemma() {
    std::size_t checked = 0, failed = 0;
    for (unsigned m = 1; m <= 64; ++m)
        for (unsigned r = 0; r <= m; ++r, ++checked)
            if (!rate_phi_bound(r, m).holds) ++failed;
    auto spot = rate_phi_bound(8, 16);
    bool spot_ok = std::abs(spot.gap - 0.09819) < 5e-6 && std::abs(spot.gap_bound - 0.09974) < 5e-6 && spot.holds;
    return {failed == 0 && spot_ok, std::to_string(checked) + " (r,m) pairs, " + std::to_string(failed) + " violations; " +
                                        fmt("(8,16) gap %.5f bound %.5f", spot.gap, spot.gap_bound)};
}

// 2
inline outcome nesting_looks() {
    std::size_t fams = 0, bad_overlap = 0, projections = 0, bad_proj = 0;
    for (unsigned m = 1; m <= 8; ++m)
        for (unsigned s = 1; s <= m; ++s)
            for (unsigned t = 1; s * t <= m; ++t) {
                auto f = multi_look_family(m, s, t);
                ++fams;
                if (f.pairwise_overlap != rational(1, std::int64_t{1} << t)) ++bad_overlap;
                for (std::size_t i = 0; i < f.looks.size(); ++i)
                    for (std::size_t j = 0; j < f.looks.size(); ++j) {
                        if (i == j) continue;
                        std::vector<std::size_t> inter;
                        std::set_intersection(f.looks[i].begin(), f.looks[i].end(), f.looks[j].begin(), f.looks[j].end(),
                                              std::back_inserter(inter));
                        if (inter.size() << t != f.looks[i].size()) ++bad_overlap;
                    }
                if (m > 6) continue;
                unsigned ms = m - (s - 1) * t;
                for (unsigned r = 0; r <= m; ++r) {
                    auto big = rm_generator(r, m), small = rm_generator(std::min(r, ms), ms);
                    for (const auto& look : f.looks) {
                        ++projections;
                        if (!codes_equal(project(big, look), small)) ++bad_proj;
                    }
                }
            }
    return {bad_overlap == 0 && bad_proj == 0, std::to_string(fams) + " families, overlap mismatches " + std::to_string(bad_overlap) +
                                                   "; " + std::to_string(projections) + " projections, mismatches " +
                                                   std::to_string(bad_proj)};
}

// 3
inline outcome spreads() {
    std::size_t fams = 0, bad = 0;
    for (unsigned s = 1; s <= 12; ++s)
        for (unsigned t = 1; s * t <= 12; ++t) {
            ++fams;
            auto sp = spread_family(s, t);
            std::uint64_t expect = ((std::uint64_t{1} << (s * t)) - 1) / ((std::uint64_t{1} << s) - 1);
            bool ok = sp.count == expect && sp.subspaces.size() == expect;
            std::vector<char> hit(std::size_t{1} << (s * t), 0);
            for (const auto& b : sp.subspaces) {
                ok = ok && set_dim(b) == static_cast<int>(s);
                for (auto v : span_of(b))
                    if (v) {
                        ok = ok && !hit[v];
                        hit[v] = 1;
                    }
            }
            for (std::size_t v = 1; v < hit.size(); ++v) ok = ok && hit[v];
            if (!ok) ++bad;
        }
    return {bad == 0, std::to_string(fams) + " (s,t) spreads, " + std::to_string(bad) + " failures"};
}

/// sum_e counts[e] q^e (1-q)^(n-e) with q = i/den as an exact rational.
inline rational exact_pe(const std::vector<std::uint64_t>& counts, unsigned i, unsigned den) {
    std::size_t n = counts.size() - 1;
    big_int num = 0;
    for (std::size_t e = 0; e <= n; ++e) {
        if (!counts[e]) continue;
        big_int term = counts[e];
        for (std::size_t k = 0; k < e; ++k) term *= i;
        for (std::size_t k = e; k < n; ++k) term *= den - i;
        num += term;
    }
    big_int d = 1;
    for (std::size_t k = 0; k < n; ++k) d *= den;
    return rational(num, d);
}

// 4
inline outcome bec_two_look_recursion() {
    std::size_t checks = 0, fails = 0;
    double worst_ratio = 0;
    std::vector<std::vector<std::uint64_t>> cache(6 * 6);
    auto counts = [&](unsigned r, unsigned m) -> const std::vector<std::uint64_t>& {
        auto& c = cache[m * 6 + r];
        if (c.empty()) c = bec_unrecoverable_counts(rm_generator(r, m), 0);
        return c;
    };
    for (unsigned m = 1; m <= 4; ++m)
        for (unsigned r = 0; r <= m; ++r) {
            rational rho((big_int(1) << (m - 1)) - 1, (big_int(1) << m) - 1);
            const auto& cs = counts(r, m);
            const auto& cl = counts(r, m + 1);
            for (unsigned i = 1; i <= 19; ++i) {
                rational ps = exact_pe(cs, i, 20), pl = exact_pe(cl, i, 20);
                rational bound = (1 - rho) * ps * ps + rho * ps;
                ++checks;
                if (pl > bound) ++fails;
                if (bound > 0) worst_ratio = std::max(worst_ratio, static_cast<double>(pl / bound));
            }
        }
    return {fails == 0, std::to_string(checks) + " exact rational comparisons, " + std::to_string(fails) +
                            " violations; max P_e(C)/bound " + fmt("%.6f", worst_ratio)};
}

// 5
inline outcome metric_chain() {
    std::vector<std::pair<std::string, binary_code>> codes;
    for (std::size_t n = 2; n <= 5; ++n) codes.emplace_back("rep " + std::to_string(n), repetition_code(n));
    for (std::size_t n = 2; n <= 5; ++n) codes.emplace_back("spc " + std::to_string(n), spc_code(n));
    codes.emplace_back("rm 1 3", rm_generator(1, 3));
    codes.emplace_back("rm 1 4", rm_generator(1, 4));
    codes.emplace_back("rm 2 4", rm_generator(2, 4));
    std::size_t checks = 0, fails = 0;
    std::string first_fail;
    for (const auto& [label, code] : codes)
        for (int kind = 0; kind < 2; ++kind)
            for (int i = 1; i <= 9; ++i) {
                double p = 0.05 * i;
                auto ch = kind == 0 ? channel_model::bec(p) : channel_model::bsc(p);
                auto mt = extrinsic_metrics_exact(code, ch, 0);
                double gap = ch.capacity() - to_double(code.rate());
                bool ok = 2 * mt.ber <= mt.mmse + 1e-12 && mt.mmse <= mt.cond_entropy + 1e-12 && mt.cond_entropy <= 1 - gap + 1e-9;
                ++checks;
                if (!ok) {
                    ++fails;
                    if (first_fail.empty()) first_fail = "; first failure " + label + " " + ch.describe();
                }
            }
    return {fails == 0, std::to_string(checks) + " code/channel points, " + std::to_string(fails) + " violations" + first_fail};
}

// 6
inline outcome exit_area() {
    double worst = 0;
    std::size_t cases = 0;
    for (const auto& code : {repetition_code(3), spc_code(4), rm_generator(1, 3)})
        for (double p : {0.1, 0.3}) {
            auto c = exit_curve(code, channel_model::bsc(p), 201);
            worst = std::max(worst, c.gap());
            ++cases;
        }
    double worst_closed = 0;
    for (std::size_t n = 3; n <= 5; ++n) {
        auto a = exit_curve(repetition_code(n), channel_model::bec(0.0), 201);
        auto b = exit_curve(spc_code(n), channel_model::bec(0.0), 201);
        double nd = static_cast<double>(n);
        worst_closed = std::max({worst_closed, std::abs(a.area - 1 / nd), std::abs(a.mutual_info_per_bit - 1 / nd),
                                 std::abs(b.area - (nd - 1) / nd), std::abs(b.mutual_info_per_bit - (nd - 1) / nd)});
    }
    return {worst <= 1e-3 && worst_closed <= 1e-9,
            std::to_string(cases) + " BSC cases, max |area - I/n| " + fmt("%.3g", worst) + "; erasure closed forms max error " +
                fmt("%.3g", worst_closed)};
}

inline boolean_fn random_real_fn(unsigned n, double p, counter_rng& rng) {
    std::vector<double> v(std::size_t{1} << n);
    for (auto& x : v) x = 2 * rng.uniform() - 1;
    return boolean_fn(n, std::move(v), p);
}

/// Indicator with a random density drawn log-uniformly from [1e-3, 0.9].
inline boolean_fn random_indicator(unsigned n, double p, counter_rng& rng) {
    double q = std::exp(std::log(1e-3) + rng.uniform() * (std::log(0.9) - std::log(1e-3)));
    std::vector<double> v(std::size_t{1} << n);
    for (auto& x : v) x = rng.bernoulli(q) ? 1.0 : 0.0;
    return boolean_fn(n, std::move(v), p);
}

// 7
inline outcome fourier_suite() {
    counter_rng rng(20240607, 7);
    double worst_parseval = 0, worst_restrict = 0;
    const double ps[] = {0.1, 0.25, 0.5, 0.75};
    for (int i = 0; i < 400; ++i) {
        unsigned n = 1 + static_cast<unsigned>(rng.below(14));
        auto f = random_real_fn(n, ps[i % 4], rng);
        auto s = biased_transform(f);
        double lhs = 0;
        for (double c : s.coeffs) lhs += c * c;
        double rhs = second_moment(f);
        worst_parseval = std::max(worst_parseval, std::abs(lhs - rhs) / rhs);
        if (n <= 12) {
            std::uint64_t a = rng.below(std::uint64_t{1} << n);
            auto r1 = restrict_spectrum(f, a);
            auto r2 = zero_outside(s, a);
            for (std::size_t k = 0; k < r1.coeffs.size(); ++k)
                worst_restrict = std::max(worst_restrict, std::abs(r1.coeffs[k] - r2.coeffs[k]));
        }
    }
    std::size_t lk_fail = 0, lk_total = 0;
    for (double p : {0.1, 0.3, 0.5})
        for (int i = 0; i < 1000; ++i) {
            auto rep = level_k_check(random_indicator(12, p, rng));
            ++lk_total;
            if (!rep.pass) ++lk_fail;
            for (const auto& row : rep.eps_rows)
                if (!row.pass) ++lk_fail;
        }
    std::size_t hc_fail = 0;
    for (int i = 0; i < 500; ++i) {
        unsigned n = 1 + static_cast<unsigned>(rng.below(12));
        double p = 0.05 + 0.9 * rng.uniform();
        if (!hypercontractive_check(random_indicator(n, p, rng)).pass) ++hc_fail;
    }
    bool ok = worst_parseval <= 1e-9 && worst_restrict <= 1e-12 && lk_fail == 0 && hc_fail == 0;
    return {ok, "Parseval max rel " + fmt("%.2g", worst_parseval) + ", restriction max abs " + fmt("%.2g", worst_restrict) +
                    ", level-k failures " + std::to_string(lk_fail) + "/" + std::to_string(lk_total) + ", hypercontractive failures " +
                    std::to_string(hc_fail) + "/500"};
}

// 8
inline outcome symmetry_identity() {
    std::size_t checks = 0, fails = 0;
    double worst = 0;
    auto maj = boolean_fn(3, {0, 0, 0, 1, 0, 1, 1, 1}, 0.5);
    auto s3 = symmetric_group(3);
    for (double p : {0.5, 0.2})
        for (std::uint64_t a = 0; a < 8; ++a)
            for (unsigned k = 0; k <= 3; ++k) {
                auto f = maj;
                f.p = p;
                auto r = restriction_identity_check(f, s3, a, k);
                ++checks;
                worst = std::max({worst, std::abs(r.lhs - r.rhs), std::abs(r.var_lhs - r.var_rhs)});
                if (!r.pass || !r.var_pass) ++fails;
            }
    // A = {0}, k = 1: one third of the level-1 mass
    auto spec = biased_transform(maj);
    double lvl1 = spec.coeffs[1] * spec.coeffs[1] + spec.coeffs[2] * spec.coeffs[2] + spec.coeffs[4] * spec.coeffs[4];
    auto r0 = restriction_identity_check(maj, s3, 1, 1);
    bool third_ok = std::abs(r0.lhs - lvl1 / 3) <= 1e-12;
    auto gl = gl_shifted_group(3);
    counter_rng rng(99, 3);
    for (double p : {0.1, 0.3, 0.5}) {
        auto f = extrinsic_indicator(rm_generator(1, 3), channel_model::bec(p), 0);
        for (int i = 0; i < 24; ++i) {
            std::uint64_t a = i < 4 ? std::vector<std::uint64_t>{0, 0x7, 0x7f, 0x15}[i] : rng.below(128);
            for (unsigned k = 0; k <= 7; ++k) {
                auto r = restriction_identity_check(f, gl, a, k);
                ++checks;
                worst = std::max({worst, std::abs(r.lhs - r.rhs), std::abs(r.var_lhs - r.var_rhs)});
                if (!r.pass || !r.var_pass) ++fails;
            }
        }
    }
    return {fails == 0 && third_ok && worst <= 1e-9, std::to_string(checks) + " (f, A, k) checks, " + std::to_string(fails) +
                                                         " failures, max deviation " + fmt("%.2g", worst) +
                                                         (third_ok ? "; majority A={0} k=1 is one third" : "; majority third FAILED")};
}

// 9
inline outcome gl_symmetry_bound() {
    std::size_t exact_checks = 0, exact_fail = 0;
    for (unsigned m = 1; m <= 4; ++m) {
        unsigned n = (1U << m) - 1;
        std::vector<perm> elems;
        for (const auto& g : enumerate_gl(m)) elems.push_back(g.shifted_perm());
        for (unsigned ell = 1; ell <= m; ++ell) {
            std::uint64_t a = (std::uint64_t{1} << ((1U << (m - ell)) - 1)) - 1;
            auto table = orbit_restriction_table(elems, n, a);
            for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
                std::vector<std::uint64_t> vecs;
                for (std::uint64_t b = s; b; b &= b - 1) vecs.push_back(static_cast<std::uint64_t>(std::countr_zero(b)) + 1);
                unsigned d = static_cast<unsigned>(set_dim(vecs));
                double ratio = static_cast<double>(rational(gaussian_binomial(m - ell, d), gaussian_binomial(m, d)));
                ++exact_checks;
                if (std::abs(table[s] - ratio) > 1e-12 || table[s] > std::ldexp(1.0, -static_cast<int>(ell * d)) + 1e-15) ++exact_fail;
            }
        }
    }
    // m = 5..8: coordinates can exceed 64, so work with explicit point lists.
    std::size_t sampled = 0, sampled_fail = 0;
    counter_rng pick(77, 9);
    for (unsigned m = 5; m <= 8; ++m) {
        unsigned n = (1U << m) - 1;
        for (int rep = 0; rep < 4; ++rep) {
            unsigned ell = 1 + static_cast<unsigned>(pick.below(std::min(m - 1, 3U)));
            unsigned a_size = (1U << (m - ell)) - 1;
            std::size_t size = 1 + pick.below(3);
            std::vector<std::uint64_t> pts;
            while (pts.size() < size) {
                auto x = pick.below(n);
                if (std::find(pts.begin(), pts.end(), x) == pts.end()) pts.push_back(x);
            }
            std::vector<std::uint64_t> vecs;
            for (auto x : pts) vecs.push_back(x + 1);
            unsigned d = static_cast<unsigned>(set_dim(vecs));
            double ratio = static_cast<double>(rational(gaussian_binomial(m - ell, d), gaussian_binomial(m, d)));
            const std::uint64_t samples = 20000;
            std::uint64_t hit = 0;
            for (std::uint64_t i = 0; i < samples; ++i) {
                counter_rng rng(1000 + m * 10 + rep, i);
                auto pi = sample_gl(m, rng).shifted_perm();
                bool inside = true;
                for (auto x : pts) inside = inside && pi[x] < a_size;
                hit += inside;
            }
            double est = static_cast<double>(hit) / samples;
            double sigma = std::sqrt(ratio * (1 - ratio) / samples);
            ++sampled;
            if (std::abs(est - ratio) > 3 * sigma + 1e-12 || est > std::ldexp(1.0, -static_cast<int>(ell * d)) + 3 * sigma)
                ++sampled_fail;
        }
    }
    return {exact_fail == 0 && sampled_fail == 0, std::to_string(exact_checks) + " exhaustive (m, l, S) checks with " +
                                                      std::to_string(exact_fail) + " failures; " + std::to_string(sampled) +
                                                      " sampled checks (m = 5..8) with " + std::to_string(sampled_fail) + " outside 3 sigma"};
}

// 10
inline outcome three_look() {
    bool table_ok = true;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                int maj = majority3(a, b, c);
                table_ok = table_ok && majority_union_holds(a, b, c) && maj == ((a + b + c) >= 2) &&
                           maj == a * b + a * c + b * c - 2 * a * b * c;
            }
    auto fam = multi_look_family(6, 3, 2);
    auto r = three_look_experiment(rm_generator(1, 6), fam, 0.05, 1000000, 2024);
    return {table_ok && r.pass && r.rho == 0.25,
            std::string(table_ok ? "union table exact" : "union table FAILED") + "; q " + fmt("%.5f", r.single_error) + ", majority " +
                fmt("%.5f +- %.5f", r.majority_error, r.majority_std_error) + " vs bound " + fmt("%.5f", r.bound)};
}

// 11
inline outcome recursion_closed_forms() {
    double worst = 0;
    for (double delta : {0.5, 0.2, 0.05, 0.01, 0.001})
        for (double rho : {0.0, 0.25, 0.5, 0.75, 0.9}) {
            double o = (1 - delta) / delta, m = 1 - delta;
            for (unsigned k = 1; k <= 40; ++k) {
                o = bec_odds(from_odds(o), rho);
                m = mmse_odds(m, rho);
                double co = std::pow(1 / (2 - rho), k) * (1 - delta) / delta;
                double cm = std::pow((1 + rho) / 2, k) * (1 - delta) / delta;
                worst = std::max({worst, std::abs(o - co) / co, std::abs(odds(m) - cm) / cm});
            }
        }
    std::size_t fails = 0, pts = 0;
    for (int i = 1; i <= 10; ++i) {
        double p = 0.05 * i;
        for (int j = 1; j <= 10000; ++j, ++pts)
            if (!alpha_relation(j / 10001.0, p).holds) ++fails;
    }
    return {worst <= 1e-12 && fails == 0, "closed-form max rel error " + fmt("%.2g", worst) + "; alpha relation " +
                                             std::to_string(fails) + " failures on " + std::to_string(pts) + " grid points"};
}

/// Pr[Bin(n,p) >= k].
inline double binomial_tail(unsigned n, unsigned k, double p) {
    double s = 0;
    for (unsigned i = k; i <= n; ++i) s += static_cast<double>(binomial(n, i)) * std::pow(p, i) * std::pow(1 - p, n - i);
    return s;
}

// 12
inline outcome transfer_formulas() {
    std::vector<std::string> bad;
    double a = transfer_alpha(100, 0.1, 0.05);
    if (std::abs(a - 0.981) > 1e-3) bad.push_back("alpha example");
    double w = transfer_width(1e4, 1.0 / (1024.0 * 1024.0));
    if (std::abs(w - 0.1755) > 5e-4) bad.push_back("width example");
    if (transfer_alpha(100, 0.2, 0.2) != 0.0) bad.push_back("alpha at midpoint");
    double prev = INFINITY;
    for (int i = 1; i <= 50; ++i) {
        double p = 0.01 * i, al = transfer_alpha(400, 0.3, p);
        if (!(al < prev)) bad.push_back("alpha not decreasing in p");
        if ((p < 0.3 && al <= 0) || (p > 0.3 + 1e-12 && al >= 0)) bad.push_back("alpha sign");
        prev = al;
    }
    prev = INFINITY;
    for (double d = 10; d <= 1e6; d *= 1.5) {
        double wd = transfer_width(d, 1e-4);
        if (!(wd < prev)) bad.push_back("width not decreasing in d");
        prev = wd;
    }
    for (double n : {8.0, 64.0, 1024.0}) {
        auto rec = tz_sasoglu_transfer({n, 50, 0.2, 0.25, 0}, 1 / (n * n));
        if (!(std::isfinite(rec.bms_block_bound) && std::isfinite(rec.bms_block_stated) && rec.bms_block_stated > 0 &&
              rec.simplified_valid && rec.p_low < 0.2))
            bad.push_back("block bounds");
    }
    auto code = repetition_code(15);
    auto table = build_syndrome_table(code);
    double tail_gap = 0;
    for (double p : {0.05, 0.2, 0.35, 0.45, 0.5}) tail_gap = std::max(tail_gap, std::abs(block_error_exact(table, p) - binomial_tail(15, 8, p)));
    if (tail_gap > 1e-12) bad.push_back("syndrome block error vs binomial tail");
    auto closed = theta_bisection([](double p, std::uint64_t) { return rate_estimate{binomial_tail(15, 8, p), 0, 0}; }, 0, 1e-3);
    auto est = theta_bisection_mc(code, 20000, 515, 1e-3);
    double slope = 15 * static_cast<double>(binomial(14, 7)) * std::pow(closed.theta, 7) * std::pow(1 - closed.theta, 7);
    double tol = est.bracket + closed.bracket + 3 * est.last_std_error / slope;
    if (std::abs(est.theta - closed.theta) > tol) bad.push_back("theta bisection");
    std::string detail = "theta mc " + fmt("%.5f", est.theta) + " vs closed form " + fmt("%.5f", closed.theta) + " (tol " +
                         fmt("%.4f", tol) + "); alpha example " + fmt("%.4f", a) + ", width " + fmt("%.4f", w);
    for (const auto& b : bad) detail += "; FAILED " + b;
    return {bad.empty(), detail};
}

inline std::string write_and_read(const std::filesystem::path& path, const std::string& content) {
    {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 13
inline outcome determinism() {
    std::vector<std::pair<std::string, command_args>> runs;
    command_args m;
    m.set("code", "rm 1 4");
    m.set("channel", "bsc 0.05");
    m.set("mode", "mc");
    m.set("samples", "20000");
    m.set("seed", "11");
    runs.emplace_back("metrics", m);
    command_args mb = m;
    mb.set("channel", "bms 1:0.6,-1:0.1,0.5:0.2,-0.5:0.05,0:0.05");
    mb.set("code", "rm 1 3");
    runs.emplace_back("metrics", mb);
    command_args l;
    l.set("m", "6");
    l.set("r", "1");
    l.set("p", "0.05");
    l.set("samples", "20000");
    l.set("seed", "5");
    runs.emplace_back("looks", l);
    command_args t;
    t.set("code", "rep 15");
    t.set("p", "0.1");
    t.set("samples", "5000");
    t.set("seed", "3");
    runs.emplace_back("transfer", t);
    auto dir = std::filesystem::temp_directory_path() / ("rmnest_det_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    std::size_t files = 0, mismatched = 0;
    for (auto& [cmd, args] : runs)
        for (const char* format : {"csv", "json"})
            for (unsigned workers : {1U, 3U}) {
                args.set("workers", std::to_string(workers));
                auto first = write_and_read(dir / "a.out", render(run_command(cmd, args), format));
                auto second = write_and_read(dir / "b.out", render(run_command(cmd, args), format));
                files += 2;
                if (first != second || first.empty()) ++mismatched;
            }
    std::filesystem::remove_all(dir);
    return {mismatched == 0, std::to_string(files) + " output files from " + std::to_string(runs.size()) + " MC commands, " +
                                 std::to_string(mismatched) + " rerun mismatches"};
}

// 14
inline outcome list_ball() {
    auto r = list_ball_experiment(repetition_code(5), 0.2, 1000000, 4242);
    return {r.pass, "Q " + fmt("%.5f", r.q_hat) + ", Pr(Delta >= sqrt Q) " + fmt("%.5f +- %.5f", r.far_prob, r.far_std_error) +
                        " vs sqrt Q " + fmt("%.5f", r.radius)};
}

inline const std::vector<criterion>& criteria() {
    static const std::vector<criterion> all = {
        {1, "rate lemma", 1, rate_lemma},
        {2, "nesting and looks", 10, nesting_looks},
        {3, "spread codes", 30, spreads},
        {4, "BEC two-look recursion", 120, bec_two_look_recursion},
        {5, "metric chain and EXIT initialization", 300, metric_chain},
        {6, "EXIT area", 300, exit_area},
        {7, "Fourier suite", 180, fourier_suite},
        {8, "restriction identity under symmetry", 120, symmetry_identity},
        {9, "GL symmetry bound", 180, gl_symmetry_bound},
        {10, "three-look majority", 300, three_look},
        {11, "recursion closed forms", 10, recursion_closed_forms},
        {12, "transfer formulas", 180, transfer_formulas},
        {13, "determinism", 600, determinism},
        {14, "list ball", 60, list_ball},
    };
    return all;
}

inline result run_one(const criterion& c) {
    result r{c.id, c.name, false, "", 0, c.budget_seconds};
    auto t0 = std::chrono::steady_clock::now();
    try {
        auto o = c.run();
        r.pass = o.pass;
        r.detail = o.detail;
    } catch (const std::exception& e) {
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > r.budget) {
        r.pass = false;
        r.detail += "; over the runtime budget";
    }
    return r;
}

inline std::string format_line(const result& r) {
    char head[128];
    std::snprintf(head, sizeof head, "[%s] %2d %-38s %8.2fs  ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
    return head + r.detail;
}

}  // namespace rmnest::acceptance
