#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rmnest/bounds.hpp"
#include "rmnest/channels.hpp"
#include "rmnest/codes.hpp"
#include "rmnest/decoders.hpp"
#include "rmnest/fourier.hpp"
#include "rmnest/harness.hpp"
#include "rmnest/io.hpp"
#include "rmnest/subspaces.hpp"

namespace rmnest {

/// Named arguments of one command, from CLI flags or a config file.
struct command_args {
    std::map<std::string, std::string> values;
    std::map<std::string, std::size_t> lines;  // config line per key, when read from a file

    bool has(const std::string& k) const { return values.count(k) != 0; }
    std::string get(const std::string& k, const std::string& fallback = "") const {
        auto it = values.find(k);
        return it == values.end() ? fallback : it->second;
    }
    void set(const std::string& k, const std::string& v) { values[k] = v; }

    [[noreturn]] void fail(const std::string& k, const std::string& msg) const {
        auto it = lines.find(k);
        if (it != lines.end()) throw config_error(it->second, k + ": " + msg);
        throw parameter_error("--" + k + ": " + msg);
    }

    double get_double(const std::string& k, double fallback) const {
        if (!has(k)) return fallback;
        return parse_double(k, get(k));
    }
    std::uint64_t get_u64(const std::string& k, std::uint64_t fallback) const {
        if (!has(k)) return fallback;
        std::string s = trim(get(k));
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) fail(k, "expected a non-negative integer, got '" + s + "'");
        return v;
    }
    unsigned get_unsigned(const std::string& k, unsigned fallback) const {
        auto v = get_u64(k, fallback);
        if (v > 0xffffffffULL) fail(k, "value too large");
        return static_cast<unsigned>(v);
    }
    /// Comma- or space-separated reals; "a:b:n" expands to n evenly spaced points.
    std::vector<double> get_list(const std::string& k, std::vector<double> fallback) const {
        if (!has(k)) return fallback;
        std::string s = get(k);
        std::replace(s.begin(), s.end(), ',', ' ');
        std::istringstream is(s);
        std::vector<double> out;
        std::string tok;
        while (is >> tok) {
            auto c1 = tok.find(':');
            if (c1 == std::string::npos) {
                out.push_back(parse_double(k, tok));
                continue;
            }
            auto c2 = tok.find(':', c1 + 1);
            if (c2 == std::string::npos) fail(k, "range needs the form a:b:n");
            double a = parse_double(k, tok.substr(0, c1)), b = parse_double(k, tok.substr(c1 + 1, c2 - c1 - 1));
            double n = parse_double(k, tok.substr(c2 + 1));
            if (n < 2 || n != std::floor(n)) fail(k, "range count must be an integer >= 2");
            // snap to 15 significant digits so 0.1:0.5:5 yields 0.3, not 0.30000000000000004
            for (int i = 0; i < static_cast<int>(n); ++i) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.15g", a + (b - a) * i / (n - 1));
                out.push_back(std::strtod(buf, nullptr));
            }
        }
        if (out.empty()) fail(k, "empty list");
        return out;
    }

    /// Canonical text of all arguments except output placement.
    std::string canonical() const {
        std::string s;
        for (const auto& [k, v] : values)
            if (k != "out" && k != "format") s += k + "=" + v + "\n";
        return s;
    }

private:
    double parse_double(const std::string& k, const std::string& raw) const {
        std::string s = trim(raw);
        try {
            std::size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::logic_error&) {
            fail(k, "expected a number, got '" + s + "'");
        }
    }
};

inline const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "command", "code", "channel", "p", "target", "mode", "samples", "seed", "workers", "out", "format",
        "metrics", "grid", "kind", "m-min", "m-max", "r", "m", "k", "s", "t", "delta", "eta", "capacity",
        "theorem", "variant", "rho", "ell", "steps", "start", "points", "theta", "tol", "d", "suite"};
    return keys;
}

// ---- specs ---------------------------------------------------------------------------

struct code_spec {
    binary_code code;
    std::string label;
    std::optional<std::pair<unsigned, unsigned>> rm;  // (r, m)
};

inline code_spec parse_code_spec(const std::string& spec) {
    std::istringstream is(spec);
    std::string kind;
    is >> kind;
    auto num = [&](const char* what) {
        long long v;
        if (!(is >> v) || v < 0) throw parameter_error(std::string("code spec: expected ") + what + " in '" + spec + "'");
        return static_cast<unsigned>(v);
    };
    if (kind == "rm") {
        unsigned r = num("r"), m = num("m");
        return {rm_generator(r, m), "rm " + std::to_string(r) + " " + std::to_string(m), std::make_pair(r, m)};
    }
    if (kind == "rep") {
        unsigned n = num("n");
        return {repetition_code(n), "rep " + std::to_string(n), std::nullopt};
    }
    if (kind == "spc") {
        unsigned n = num("n");
        return {spc_code(n), "spc " + std::to_string(n), std::nullopt};
    }
    std::ifstream in(spec);
    if (!in) throw parameter_error("code spec: '" + spec + "' is neither rm/rep/spc nor a readable file");
    return {read_code(in), spec, std::nullopt};
}

inline code_spec arg_code(const command_args& a, const std::string& fallback = "rm 1 3") {
    try {
        return parse_code_spec(a.get("code", fallback));
    } catch (const feasibility_error&) {
        throw;
    } catch (const std::exception& e) {
        a.fail("code", e.what());
    }
}

/// Channels from --channel; with --p, --channel may give only the kind ("bec"/"bsc").
inline std::vector<channel_model> arg_channels(const command_args& a, const std::string& fallback = "bsc 0.1") {
    std::string spec = trim(a.get("channel", fallback));
    try {
        if (a.has("p")) {
            std::string kind = spec.substr(0, spec.find(' '));
            if (kind != "bec" && kind != "bsc") a.fail("channel", "--p needs a bec or bsc channel kind");
            std::vector<channel_model> out;
            for (double p : a.get_list("p", {})) out.push_back(make_channel(kind + " " + format_double(p)));
            return out;
        }
        return {make_channel(spec)};
    } catch (const config_error&) {
        throw;
    } catch (const std::exception& e) {
        a.fail("channel", e.what());
    }
}

inline std::vector<double> default_p_grid19() {
    std::vector<double> g;
    for (int i = 1; i <= 19; ++i) g.push_back(i * 0.05);
    return g;
}

/// Tool, version, seed and config hash, placed ahead of the command's own meta entries.
inline void provenance(result_table& t, const std::string& command, const command_args& a) {
    std::vector<std::pair<std::string, cell>> head = {{"tool", std::string("rmnest")},
                                                      {"version", std::string(tool_version)},
                                                      {"command", command}};
    if (a.has("seed") || a.get("mode") == "mc") head.emplace_back("seed", static_cast<std::int64_t>(a.get_u64("seed", 1)));
    head.emplace_back("config_hash", hex64(fnv1a(command + "\n" + a.canonical())));
    for (auto& kv : t.meta) head.push_back(std::move(kv));
    t.meta = std::move(head);
}

inline cell opt_cell(const std::optional<double>& v) { return v ? cell(*v) : cell(std::string()); }

// ---- commands ------------------------------------------------------------------------

inline result_table cmd_rm_info(const command_args& a) {
    auto cs = arg_code(a);
    result_table t;
    t.columns = {"code", "n", "dim", "rate_exact", "rate", "min_distance", "phi", "gap", "gap_bound", "holds"};
    auto rate = cs.code.rate();
    std::ostringstream rs;
    rs << numerator(rate) << '/' << denominator(rate);
    cell dist = std::string();
    if (cs.code.dim() > 0 && cs.code.dim() <= 24) dist = static_cast<std::int64_t>(min_distance(cs.code));
    std::vector<cell> row = {cs.label, static_cast<std::int64_t>(cs.code.length()), static_cast<std::int64_t>(cs.code.dim()),
                             rs.str(), to_double(rate), dist};
    if (cs.rm && cs.rm->second >= 1) {
        auto rec = rate_phi_bound(cs.rm->first, cs.rm->second);
        row.insert(row.end(), {rec.phi, rec.gap, rec.gap_bound, rec.holds});
    } else {
        row.insert(row.end(), {std::string(), std::string(), std::string(), std::string()});
    }
    t.add_row(std::move(row));
    provenance(t, "rm-info", a);
    return t;
}

inline result_table cmd_metrics(const command_args& a) {
    auto cs = arg_code(a);
    auto chans = arg_channels(a);
    std::size_t target = a.get_unsigned("target", 0);
    std::string mode_s = a.get("mode", "exact");
    if (mode_s != "exact" && mode_s != "mc") a.fail("mode", "expected exact or mc, got '" + mode_s + "'");
    metrics_mode mode = mode_s == "exact" ? metrics_mode::exact : metrics_mode::monte_carlo;
    mc_options opt{a.get_u64("samples", 100000), a.get_u64("seed", 1), a.get_unsigned("workers", 1)};
    if (mode == metrics_mode::monte_carlo && opt.samples < 1000) a.fail("samples", "mc mode needs at least 1000 samples");
    std::vector<std::string> wanted = {"pe", "pb", "mmse", "ber", "cond_entropy"};
    if (a.has("metrics")) {
        std::string s = a.get("metrics");
        std::replace(s.begin(), s.end(), ',', ' ');
        std::istringstream is(s);
        std::vector<std::string> sel;
        std::string w;
        while (is >> w) {
            if (std::find(wanted.begin(), wanted.end(), w) == wanted.end()) a.fail("metrics", "unknown metric '" + w + "'");
            sel.push_back(w);
        }
        wanted = sel;
    }
    result_table t;
    t.columns = {"code", "channel", "target", "mode", "samples"};
    for (const auto& w : wanted) t.columns.push_back(w);
    if (mode == metrics_mode::monte_carlo)
        for (const auto& w : wanted) t.columns.push_back(w + "_hw");
    for (const auto& ch : chans) {
        auto m = extrinsic_metrics_for(cs.code, ch, target, mode, opt);
        std::vector<cell> row = {cs.label, ch.describe(), static_cast<std::int64_t>(target), mode_s,
                                 static_cast<std::int64_t>(m.samples)};
        auto value = [&](const std::string& w) -> cell {
            if (w == "pe") return opt_cell(m.pe);
            if (w == "pb") return m.pb;
            if (w == "mmse") return m.mmse;
            if (w == "ber") return m.ber;
            return m.cond_entropy;
        };
        auto hw = [&](const std::string& w) -> cell {
            if (w == "pe") return m.pe ? cell(m.pe_hw) : cell(std::string());
            if (w == "pb") return m.pb_hw;
            if (w == "mmse") return m.mmse_hw;
            if (w == "ber") return m.ber_hw;
            return m.cond_entropy_hw;
        };
        for (const auto& w : wanted) row.push_back(value(w));
        if (mode == metrics_mode::monte_carlo)
            for (const auto& w : wanted) row.push_back(hw(w));
        t.add_row(std::move(row));
    }
    provenance(t, "metrics", a);
    if (mode == metrics_mode::monte_carlo) t.set_meta("workers", static_cast<std::int64_t>(opt.workers));
    return t;
}

inline result_table cmd_bound_table(const command_args& a) {
    std::string kind = a.get("kind", "rate");
    result_table t;
    if (kind == "rate") {
        unsigned lo = a.get_unsigned("m-min", 1), hi = a.get_unsigned("m-max", 10);
        if (hi > 64) a.fail("m-max", "must be at most 64");
        t.columns = {"r", "m", "rate", "phi", "gap", "gap_bound", "holds"};
        for (unsigned m = lo; m <= hi; ++m)
            for (unsigned r = 0; r <= m; ++r) {
                auto rec = rate_phi_bound(r, m);
                t.add_row({static_cast<std::int64_t>(r), static_cast<std::int64_t>(m), rec.rate_value, rec.phi, rec.gap,
                           rec.gap_bound, rec.holds});
            }
    } else if (kind == "bec-two-look") {
        unsigned r = a.get_unsigned("r", 1), m = a.get_unsigned("m", 3);
        if (r > m) a.fail("r", "must not exceed m");
        if (m < 1) a.fail("m", "must be positive");
        auto shorter = rm_generator(r, m), longer = rm_generator(r, m + 1);
        auto cs = bec_unrecoverable_counts(shorter, 0), cl = bec_unrecoverable_counts(longer, 0);
        double rho = (std::ldexp(1.0, static_cast<int>(m) - 1) - 1) / (std::ldexp(1.0, static_cast<int>(m)) - 1);
        t.columns = {"p", "pe_short", "pe_long", "rho", "bound", "pass"};
        for (double p : a.get_list("p", default_p_grid19())) {
            double ps = erasure_polynomial(cs, p), pl = erasure_polynomial(cl, p), b = bec_two_look(ps, rho);
            t.add_row({p, ps, pl, rho, b, pl <= b});
        }
        t.set_meta("short_code", "rm " + std::to_string(r) + " " + std::to_string(m));
        t.set_meta("long_code", "rm " + std::to_string(r) + " " + std::to_string(m + 1));
    } else if (kind == "alpha") {
        std::uint64_t pts = a.get_u64("points", 10000);
        t.columns = {"p", "points", "max_lhs_over_rhs", "holds"};
        for (double p : a.get_list("p", {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5})) {
            double worst = 0;
            bool ok = true;
            for (std::uint64_t i = 1; i <= pts; ++i) {
                auto rel = alpha_relation(static_cast<double>(i) / static_cast<double>(pts + 1), p);
                worst = std::max(worst, rel.lhs / rel.rhs);
                ok = ok && rel.holds;
            }
            t.add_row({p, static_cast<std::int64_t>(pts), worst, ok});
        }
    } else if (kind == "recursion") {
        std::string v = a.get("variant", "bec_two_look");
        double rho = a.get_double("rho", 0.5), x = a.get_double("start", 0.5), p = a.get_double("p", 0.1);
        unsigned ell = a.get_unsigned("ell", 1), steps = a.get_unsigned("steps", 10);
        t.columns = {"step", "value", "vacuous"};
        t.add_row({std::int64_t{0}, x, x >= 1.0});
        bool as_odds = v == "bec_odds";
        double o = odds(x);
        for (unsigned i = 1; i <= steps; ++i) {
            if (v == "bec_two_look") x = bec_two_look(x, rho);
            else if (v == "bec_odds") {
                o /= (2 - rho);
                x = o;
            } else if (v == "mmse_odds") x = mmse_odds(x, rho);
            else if (v == "bsc_three_look") x = bsc_three_look(x, rho);
            else if (v == "level_k") x = x < 1.0 ? level_k(x, ell, p) : x;
            else if (v == "level_k_closed") x = x < 1.0 ? level_k_closed(x, ell, p) : x;
            else if (v == "level_k_bsc") x = x < 1.0 ? level_k_bsc(x, ell, p) : x;
            else a.fail("variant", "unknown recursion '" + v + "'");
            t.add_row({static_cast<std::int64_t>(i), x, x >= 1.0});
        }
        t.set_meta("variant", v);
        t.set_meta("value_is_odds", as_odds);
    } else {
        a.fail("kind", "expected rate, bec-two-look, alpha or recursion, got '" + kind + "'");
    }
    t.set_meta("kind", kind);
    provenance(t, "bound-table", a);
    return t;
}

inline result_table cmd_bound_trace(const command_args& a) {
    theorem_kind kind;
    try {
        kind = parse_theorem(a.get("theorem", "bec"));
    } catch (const parameter_error& e) {
        a.fail("theorem", e.what());
    }
    trace_params prm;
    prm.s = a.get_unsigned("s", 1);
    prm.t = a.get_unsigned("t", 3);
    prm.r = a.get_unsigned("r", 0);
    prm.m = a.get_unsigned("m", 0);
    prm.k = a.get_unsigned("k", 0);
    prm.delta = a.get_double("delta", 0);
    prm.eta = a.get_double("eta", 1);
    prm.p = a.get_double("p", 0.1);
    prm.capacity = a.get_double("capacity", -1);
    auto tr = theorem_trace(kind, prm);
    result_table t;
    t.columns = {"stage", "r", "m", "value", "rule", "vacuous"};
    for (const auto& s : tr.stages)
        t.add_row({static_cast<std::int64_t>(s.k), static_cast<std::int64_t>(s.r), static_cast<std::int64_t>(s.m), s.value, s.rule,
                   s.vacuous});
    t.set_meta("theorem", theorem_name(kind));
    t.set_meta("initial_delta", tr.initial_delta);
    t.set_meta("rho", tr.rho);
    t.set_meta("final_bound", tr.final_bound);
    t.set_meta("final_vacuous", tr.final_vacuous());
    t.set_meta("closed_form", tr.closed_form);
    if (kind == theorem_kind::corollary_bsc) t.set_meta("closed_form_fast_bsc", tr.closed_form_alt);
    t.set_meta("capacity", tr.capacity);
    t.set_meta("rate_start", tr.rate_start);
    t.set_meta("rate_end", tr.rate_end);
    t.set_meta("rate_floor", tr.rate_floor);
    for (const auto& pc : tr.preconditions) t.set_meta("precondition " + pc.clause, pc.holds);
    provenance(t, "bound-trace", a);
    return t;
}

inline result_table cmd_fourier_analyze(const command_args& a) {
    auto cs = arg_code(a);
    auto chans = arg_channels(a, "bec 0.3");
    if (chans.size() != 1) a.fail("p", "fourier-analyze takes a single channel");
    std::size_t target = a.get_unsigned("target", 0);
    auto f = extrinsic_indicator(cs.code, chans[0], target);
    auto spec = biased_transform(f);
    auto lp = level_profile(spec);
    result_table t;
    t.columns = {"level", "mass", "cumulative"};
    double cum = 0;
    for (std::size_t k = 0; k < lp.level_mass.size(); ++k) {
        cum += lp.level_mass[k];
        t.add_row({static_cast<std::int64_t>(k), lp.level_mass[k], cum});
    }
    auto lk = level_k_check(f);
    auto hc = hypercontractive_check(f);
    t.set_meta("code", cs.label);
    t.set_meta("channel", chans[0].describe());
    t.set_meta("alpha", expectation(f));
    t.set_meta("variance", lp.variance);
    t.set_meta("level_k_threshold", lk.threshold);
    t.set_meta("level_k_mass", lk.mass);
    t.set_meta("level_k_bound", lk.bound);
    t.set_meta("level_k_pass", lk.pass);
    t.set_meta("hyper_q", hc.q);
    t.set_meta("hyper_rho", hc.rho);
    t.set_meta("hyper_mass", hc.mass);
    t.set_meta("hyper_bound", hc.bound);
    t.set_meta("hyper_pass", hc.pass);
    if (cs.rm && target == 0 && cs.rm->second >= 1 && cs.rm->second <= 4) {
        unsigned m = cs.rm->second;
        auto g = gl_shifted_group(m);
        std::uint64_t amask = (std::uint64_t{1} << ((1U << (m - 1)) - 1)) - 1;
        bool all = true;
        for (unsigned k = 0; k <= f.n; ++k) all = all && restriction_identity_check(f, g, amask, k).pass;
        t.set_meta("restriction_identity_gl_pass", all);
        for (unsigned ell = 1; ell <= std::min(2U, m); ++ell) {
            auto gr = gl_restriction_check(f, m, ell);
            std::string pre = "gl_bound_l" + std::to_string(ell) + "_";
            t.set_meta(pre + "restricted_mass", gr.restricted_mass);
            t.set_meta(pre + "bound", gr.bound);
            t.set_meta(pre + "stated_bound", gr.stated_bound);
            t.set_meta(pre + "pass", gr.pass);
            t.set_meta(pre + "stated_pass", gr.stated_pass);
        }
    }
    provenance(t, "fourier-analyze", a);
    return t;
}

inline result_table cmd_exit_curve(const command_args& a) {
    auto cs = arg_code(a);
    auto chans = arg_channels(a);
    if (chans.size() != 1) a.fail("p", "exit-curve takes a single channel");
    unsigned grid = a.get_unsigned("grid", 201);
    if (grid < 3 || grid % 2 == 0) a.fail("grid", "must be an odd number of at least 3");
    auto c = exit_curve(cs.code, chans[0], grid);
    result_table t;
    t.columns = {"t", "exit_value", "h_ext"};
    for (std::size_t i = 0; i < c.grid.size(); ++i) t.add_row({c.grid[i], c.exit_values[i], c.h_ext[i]});
    t.set_meta("code", cs.label);
    t.set_meta("channel", chans[0].describe());
    t.set_meta("area", c.area);
    t.set_meta("mutual_info_per_bit", c.mutual_info_per_bit);
    t.set_meta("abs_diff", c.gap());
    t.set_meta("transitive", c.transitive);
    if (!c.transitive) t.set_meta("warning", std::string("code not verified transitive; the area identity may fail"));
    provenance(t, "exit-curve", a);
    return t;
}

inline result_table cmd_looks(const command_args& a) {
    unsigned m = a.get_unsigned("m", 6), s = a.get_unsigned("s", 3), tt = a.get_unsigned("t", 2);
    auto fam = multi_look_family(m, s, tt);
    result_table t;
    t.columns = {"look", "size", "overlap_with_first", "projected_dim", "equals_shorter_rm"};
    std::optional<unsigned> r;
    if (a.has("r")) r = a.get_unsigned("r", 0);
    if (r && *r > m) a.fail("r", "must not exceed m");
    std::optional<binary_code> big, small;
    if (r && m <= 16) {
        big = rm_generator(*r, m);
        unsigned ms = m - (s - 1) * tt;
        if (*r <= ms) small = rm_generator(*r, ms);
    }
    for (std::size_t i = 0; i < fam.looks.size(); ++i) {
        const auto& L = fam.looks[i];
        std::vector<std::size_t> inter;
        std::set_intersection(L.begin(), L.end(), fam.looks[0].begin(), fam.looks[0].end(), std::back_inserter(inter));
        std::vector<cell> row = {static_cast<std::int64_t>(i), static_cast<std::int64_t>(L.size()),
                                 static_cast<double>(inter.size()) / static_cast<double>(L.size())};
        if (big) {
            auto pc = project(*big, L);
            row.push_back(static_cast<std::int64_t>(pc.dim()));
            row.push_back(small ? cell(pc.length() == small->length() && codes_equal(pc, *small)) : cell(false));
        } else {
            row.push_back(std::string());
            row.push_back(std::string());
        }
        t.add_row(std::move(row));
    }
    t.set_meta("m", static_cast<std::int64_t>(m));
    t.set_meta("s", static_cast<std::int64_t>(s));
    t.set_meta("t", static_cast<std::int64_t>(tt));
    t.set_meta("pairwise_overlap", static_cast<double>(fam.pairwise_overlap));
    if (r && a.has("p")) {
        auto ps = a.get_list("p", {});
        if (ps.size() != 1) a.fail("p", "looks takes a single crossover probability");
        auto res = three_look_experiment(*big, fam, ps[0], a.get_u64("samples", 100000), a.get_u64("seed", 1),
                                         a.get_unsigned("workers", 1));
        t.set_meta("p", ps[0]);
        t.set_meta("samples", static_cast<std::int64_t>(res.samples));
        t.set_meta("single_look_error", res.single_error);
        t.set_meta("majority_error", res.majority_error);
        t.set_meta("majority_std_error", res.majority_std_error);
        t.set_meta("three_look_bound", res.bound);
        t.set_meta("pass", res.pass);
    }
    provenance(t, "looks", a);
    return t;
}

inline result_table cmd_spread(const command_args& a) {
    unsigned s = a.get_unsigned("s", 2), tt = a.get_unsigned("t", 3);
    auto sp = spread_family(s, tt);
    result_table t;
    t.columns = {"index", "basis"};
    std::vector<char> hit(std::size_t{1} << (s * tt), 0);
    bool partition = true;
    for (std::size_t i = 0; i < sp.subspaces.size(); ++i) {
        std::string b;
        for (auto v : sp.subspaces[i]) b += (b.empty() ? "" : " ") + std::to_string(v);
        t.add_row({static_cast<std::int64_t>(i), b});
        for (auto v : span_of(sp.subspaces[i]))
            if (v) {
                partition = partition && !hit[v];
                hit[v] = 1;
            }
    }
    for (std::size_t v = 1; v < hit.size(); ++v) partition = partition && hit[v];
    t.set_meta("s", static_cast<std::int64_t>(s));
    t.set_meta("t", static_cast<std::int64_t>(tt));
    t.set_meta("count", static_cast<std::int64_t>(sp.count));
    t.set_meta("expected_count", static_cast<std::int64_t>(((std::uint64_t{1} << (s * tt)) - 1) / ((std::uint64_t{1} << s) - 1)));
    t.set_meta("partition", partition);
    provenance(t, "spread", a);
    return t;
}

inline result_table cmd_transfer(const command_args& a) {
    auto cs = arg_code(a, "rep 15");
    auto ps = a.get_list("p", {0.1});
    double n = static_cast<double>(cs.code.length());
    double d = a.has("d") ? a.get_double("d", 0) : static_cast<double>(min_distance(cs.code));
    result_table t;
    std::optional<theta_estimate> est;
    double theta;
    if (a.has("theta")) {
        theta = a.get_double("theta", 0.5);
    } else {
        est = theta_bisection_mc(cs.code, a.get_u64("samples", 20000), a.get_u64("seed", 1), a.get_double("tol", 1e-3),
                                 a.get_unsigned("workers", 1));
        theta = est->theta;
    }
    double delta = a.get_double("delta", 1.0 / (n * n));
    t.columns = {"p", "theta", "alpha", "tz_bound", "width", "kappa", "p_low", "bms_capacity_threshold", "bms_block_bound",
                 "bms_block_simplified", "bms_block_stated", "simplified_valid"};
    for (double p : ps) {
        auto rec = tz_sasoglu_transfer({n, d, p, theta, 0}, delta);
        t.add_row({p, theta, rec.alpha, rec.tz_bound, rec.width, rec.kappa, rec.p_low, rec.bms_capacity_threshold, rec.bms_block_bound,
                   rec.bms_block_simplified, rec.bms_block_stated, rec.simplified_valid});
    }
    t.set_meta("code", cs.label);
    t.set_meta("n", n);
    t.set_meta("d", d);
    t.set_meta("delta", delta);
    if (est) {
        t.set_meta("theta_probes", static_cast<std::int64_t>(est->probes));
        t.set_meta("theta_bracket", est->bracket);
        t.set_meta("theta_last_std_error", est->last_std_error);
        t.set_meta("samples_per_probe", static_cast<std::int64_t>(a.get_u64("samples", 20000)));
    }
    provenance(t, "transfer", a);
    return t;
}

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"rm-info", "metrics", "bound-table", "bound-trace", "fourier-analyze",
                                                   "exit-curve", "looks", "spread", "transfer"};
    return names;
}

inline result_table run_command(const std::string& name, const command_args& a) {
    if (name == "rm-info") return cmd_rm_info(a);
    if (name == "metrics") return cmd_metrics(a);
    if (name == "bound-table") return cmd_bound_table(a);
    if (name == "bound-trace") return cmd_bound_trace(a);
    if (name == "fourier-analyze") return cmd_fourier_analyze(a);
    if (name == "exit-curve") return cmd_exit_curve(a);
    if (name == "looks") return cmd_looks(a);
    if (name == "spread") return cmd_spread(a);
    if (name == "transfer") return cmd_transfer(a);
    throw parameter_error("unknown command '" + name + "'");
}

/// Turns a parsed config into command arguments; unknown keys are errors.
inline std::pair<std::string, command_args> config_to_args(const experiment_config& cfg) {
    command_args a;
    for (const auto& [k, e] : cfg.entries) {
        if (!known_keys().count(k)) throw config_error(e.line, "unknown key '" + k + "'");
        if (k == "command") continue;
        a.values[k] = e.value;
        a.lines[k] = e.line;
    }
    if (!cfg.has("command")) throw config_error(0, "missing 'command' key");
    std::string cmd = cfg.get("command");
    if (cmd == "verify") return {cmd, a};
    if (std::find(command_names().begin(), command_names().end(), cmd) == command_names().end())
        throw config_error(cfg.line_of("command"), "unknown command '" + cmd + "'");
    return {cmd, a};
}

}  // namespace rmnest
