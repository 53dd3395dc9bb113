#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "rmnest/channels.hpp"
#include "rmnest/codes.hpp"
#include "rmnest/errors.hpp"

namespace rmnest {

inline constexpr double pi = 3.14159265358979323846;

/// Standard Gaussian CDF.
inline double gauss_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double gauss_cdf_inv(double u) {
    require(u > 0.0 && u < 1.0, "gauss_cdf_inv: argument must lie in (0,1)");
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

inline double to_double(const rational& q) { return static_cast<double>(q); }

inline double odds(double x) { return x / (1.0 - x); }
inline double from_odds(double o) { return std::isinf(o) ? 1.0 : o / (1.0 + o); }

// ---- rate lemma -----------------------------------------------------------------

struct rate_phi_record {
    unsigned r = 0, m = 0;
    rational rate;
    double rate_value = 0, phi = 0, gap = 0, gap_bound = 0;
    bool holds = false;
};

/// |R(RM(r,m)) - Phi((2r-m)/sqrt m)| <= 1/sqrt(2 pi m). At m = 0 the argument is undefined;
/// the record reports phi = 1 and an infinite bound.
inline rate_phi_record rate_phi_bound(unsigned r, unsigned m) {
    require(r <= m && m <= 64, "rate_phi_bound: need 0 <= r <= m <= 64");
    rate_phi_record rec;
    rec.r = r;
    rec.m = m;
    rec.rate = rm_rate_exact(r, m);
    rec.rate_value = to_double(rec.rate);
    if (m == 0) {
        rec.phi = 1.0;
        rec.gap_bound = std::numeric_limits<double>::infinity();
    } else {
        double md = m;
        rec.phi = gauss_cdf((2.0 * r - md) / std::sqrt(md));
        rec.gap_bound = 1.0 / std::sqrt(2 * pi * md);
    }
    rec.gap = std::abs(rec.rate_value - rec.phi);
    rec.holds = rec.gap <= rec.gap_bound;
    return rec;
}

inline int floor_order(double target_rate, unsigned m) {
    double md = m;
    return static_cast<int>(std::floor(md / 2 + std::sqrt(md) * gauss_cdf_inv(target_rate) / 2));
}

struct floor_choice_record {
    double target = 0;
    unsigned m = 0;
    int r = 0;
    double rate = 0, lower = 0, upper = 0;
    bool holds = false;
};

/// r = floor(m/2 + sqrt(m) Phi^{-1}(R)/2) and R - 3/sqrt(2 pi m) <= R(RM(r,m)) <= R + 1/sqrt(2 pi m).
inline floor_choice_record floor_choice_bound(double target, unsigned m) {
    require(m >= 1, "floor_choice_bound: m must be positive");
    floor_choice_record rec;
    rec.target = target;
    rec.m = m;
    rec.r = floor_order(target, m);
    require(rec.r >= 0 && rec.r <= static_cast<int>(m), "floor_choice_bound: chosen order outside [0,m]");
    rec.rate = to_double(rm_rate_exact(static_cast<unsigned>(rec.r), m));
    double w = 1.0 / std::sqrt(2 * pi * m);
    rec.lower = target - 3 * w;
    rec.upper = target + w;
    rec.holds = rec.lower <= rec.rate && rec.rate <= rec.upper;
    return rec;
}

struct telescope_record {
    double drop = 0, bound = 0;
    bool holds = false;
};

/// R(RM(r,m)) - R(RM(r,m+k)) <= k/(2 sqrt m).
inline telescope_record rate_telescope(unsigned r, unsigned m, unsigned k) {
    require(r <= m && m >= 1, "rate_telescope: need r <= m and m >= 1");
    telescope_record t;
    t.drop = to_double(rm_rate_exact(r, m) - rm_rate_exact(r, m + k));
    t.bound = k / (2.0 * std::sqrt(static_cast<double>(m)));
    t.holds = t.drop <= t.bound;
    return t;
}

// ---- recursion steps ------------------------------------------------------------

inline void require_unit_open(double v, const char* what) {
    if (!(v > 0.0 && v < 1.0)) throw parameter_error(std::string(what) + ": value must lie in (0,1)");
}
inline void require_rho(double rho, const char* what) {
    if (!(rho >= 0.0 && rho < 1.0)) throw parameter_error(std::string(what) + ": rho must lie in [0,1)");
}

inline double bec_two_look(double pe, double rho) {
    require_rho(rho, "bec_two_look");
    require(pe >= 0.0 && pe <= 1.0, "bec_two_look: pe outside [0,1]");
    return (1 - rho) * pe * pe + rho * pe;
}

/// Returns the contracted odds odds(pe)/(2 - rho).
inline double bec_odds(double pe, double rho) {
    require_rho(rho, "bec_odds");
    require_unit_open(pe, "bec_odds");
    return odds(pe) / (2 - rho);
}

/// Solves odds(M') = (1+rho)/2 odds(M) for M'.
inline double mmse_odds(double mmse, double rho) {
    require_rho(rho, "mmse_odds");
    require_unit_open(mmse, "mmse_odds");
    return from_odds((1 + rho) / 2 * odds(mmse));
}

inline double bsc_three_look(double pb, double rho) {
    require_rho(rho, "bsc_three_look");
    require(pb >= 0.0 && pb <= 1.0, "bsc_three_look: pb outside [0,1]");
    return 3 * rho * pb + 3 * (1 - rho) * pb * pb;
}

/// c = 1/(8 ln(1/lambda)), lambda = min(p, 1-p).
inline double level_k_constant(double p) {
    require_unit_open(p, "level_k_constant");
    return 1.0 / (8.0 * std::log(1.0 / std::min(p, 1.0 - p)));
}

inline double level_k_gamma(double pe, unsigned ell, double p) {
    require_unit_open(pe, "level_k");
    require(ell >= 1, "level_k: ell must be positive");
    double c = level_k_constant(p), e = static_cast<double>(ell);
    return pe + std::pow(2.0, -e) * std::pow(pe, 1.0 / 6.0) + std::pow(c * std::log(1.0 / pe), -e);
}

inline double level_k(double pe, unsigned ell, double p) { return pe * level_k_gamma(pe, ell, p); }

/// Three-look form: 3 pb gamma.
inline double level_k_bsc(double pb, unsigned ell, double p) { return 3 * pb * level_k_gamma(pb, ell, p); }

/// pe (2/(c ln(1/pe)))^ell for ell in {1, 2}.
inline double level_k_closed(double pe, unsigned ell, double p) {
    require_unit_open(pe, "level_k_closed");
    require(ell == 1 || ell == 2, "level_k_closed: closed form exists for ell = 1 or 2");
    double c = level_k_constant(p);
    return pe * std::pow(2.0 / (c * std::log(1.0 / pe)), static_cast<double>(ell));
}

struct alpha_relation_record {
    double lhs = 0, rhs = 0;
    bool holds = false;
};

/// alpha + alpha^(1/6)/2 + 1/(c ln(1/alpha)) <= 2/(c ln(1/alpha)).
inline alpha_relation_record alpha_relation(double alpha, double p) {
    require_unit_open(alpha, "alpha_relation");
    double c = level_k_constant(p), u = 1.0 / (c * std::log(1.0 / alpha));
    alpha_relation_record a{alpha + 0.5 * std::pow(alpha, 1.0 / 6.0) + u, 2 * u, false};
    a.holds = a.lhs <= a.rhs;
    return a;
}

// ---- theorem traces -------------------------------------------------------------

enum class theorem_kind { bec, bms, fast_bec, fast_bsc, corollary_bsc };

inline theorem_kind parse_theorem(const std::string& s) {
    if (s == "bec") return theorem_kind::bec;
    if (s == "bms") return theorem_kind::bms;
    if (s == "fast_bec") return theorem_kind::fast_bec;
    if (s == "fast_bsc") return theorem_kind::fast_bsc;
    if (s == "corollary_bsc") return theorem_kind::corollary_bsc;
    throw parameter_error("unknown theorem '" + s + "'");
}

inline std::string theorem_name(theorem_kind k) {
    switch (k) {
        case theorem_kind::bec: return "bec";
        case theorem_kind::bms: return "bms";
        case theorem_kind::fast_bec: return "fast_bec";
        case theorem_kind::fast_bsc: return "fast_bsc";
        case theorem_kind::corollary_bsc: return "corollary_bsc";
    }
    return "?";
}

struct trace_params {
    unsigned s = 1, t = 1;             // bec, bms, fast_bec, corollary_bsc
    unsigned r = 0, m = 0, k = 0;      // fast_bsc
    double delta = 0, eta = 1;         // fast_bsc
    double p = 0.1;                    // channel parameter (erasure or crossover)
    double capacity = -1;              // bms; defaults to the BSC(p) capacity
};

struct bound_stage {
    unsigned k = 0;       // stage index
    unsigned r = 0, m = 0;
    double value = 0;
    std::string rule;
    bool vacuous = false;
};

struct precondition {
    std::string clause;
    bool holds = false;
};

struct bound_trace {
    theorem_kind theorem = theorem_kind::bec;
    std::vector<bound_stage> stages;
    double initial_delta = 0, rho = 0, final_bound = 0, closed_form = 0;
    double closed_form_alt = 0;  // corollary_bsc: the fast_bsc form at eta = 1/s
    unsigned r = 0, m = 0, k = 0;
    double capacity = 0, rate_start = 0, rate_end = 0, rate_floor = 0;
    std::vector<precondition> preconditions;
    bool final_vacuous() const { return final_bound >= 1.0; }
};

namespace detail {

inline void push_stage(bound_trace& tr, unsigned k, double value, const std::string& rule) {
    tr.stages.push_back({k, tr.r, tr.m + k, value, rule, value >= 1.0});
}

/// m = (st)^2, k = 2t, R = C - 2/sqrt(2 pi m), r = floor(m/2 + sqrt(m) Phi^{-1}(R)/2).
inline void square_setup(bound_trace& tr, unsigned s, unsigned t, double capacity) {
    if (s < 1 || t < 1) throw parameter_error("theorem trace: s and t must be positive");
    tr.m = (s * t) * (s * t);
    tr.k = 2 * t;
    if (tr.m + tr.k > 4096) throw feasibility_error("theorem trace: m + k above 4096");
    tr.capacity = capacity;
    double w = 1.0 / std::sqrt(2 * pi * tr.m);
    double target = capacity - 2 * w;
    if (!(target > 0.0 && target < 1.0)) throw parameter_error("theorem trace: R = C - 2/sqrt(2 pi m) must lie in (0,1)");
    int r = floor_order(target, tr.m);
    if (r < 0 || r > static_cast<int>(tr.m)) throw parameter_error("theorem trace: order r = floor(m/2 + sqrt(m) Phi^-1(R)/2) outside [0,m]");
    tr.r = static_cast<unsigned>(r);
    tr.initial_delta = w;
    tr.rate_start = to_double(rm_rate_exact(tr.r, tr.m));
    tr.rate_end = to_double(rm_rate_exact(tr.r, tr.m + tr.k));
    tr.rate_floor = capacity - 1.0 / s - 2.0 / (s * t);
    tr.preconditions.push_back({"R(C_k) >= C - 1/s - 2/(st)", tr.rate_end >= tr.rate_floor});
}

inline double bsc_crossover_for_capacity(double capacity) {
    require(capacity > 0.0 && capacity < 1.0, "capacity must lie in (0,1)");
    double lo = 0.0, hi = 0.5;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (1.0 - h2(mid) > capacity ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// k/2 mmse-odds stages (rho = 1/2) then k/8 three-look level-2 stages.
inline void bsc_stages(bound_trace& tr, double p, double eta) {
    tr.rho = 0.5;
    double c = level_k_constant(p);
    double v = (1 - tr.initial_delta) / tr.initial_delta;
    push_stage(tr, 0, v, "init (1-delta)/delta");
    for (unsigned j = 1; j <= tr.k / 2; ++j) {
        v *= (1 + tr.rho) / 2;
        push_stage(tr, j, v, "mmse_odds");
    }
    double mid = v;
    for (unsigned j = 1; j <= tr.k / 8; ++j) {
        if (v < 1.0) {
            v = level_k_closed(v, 2, p);
            push_stage(tr, tr.k / 2 + 4 * j, v, "level_k_bsc l=2");
        } else {
            push_stage(tr, tr.k / 2 + 4 * j, v, "level_k_bsc l=2 (input vacuous)");
        }
    }
    tr.final_bound = v;
    double kd = tr.k;
    tr.closed_form = std::exp(-kd / 8 * std::log(std::exp(1.0) * kd / (2 * eta)));
    tr.preconditions.push_back({"k >= (16/c)^2/(2 eta)", kd >= (16 / c) * (16 / c) / (2 * eta)});
    tr.preconditions.push_back({"ln(1/P(C_{k/2})) >= k/8", mid < 1.0 && std::log(1.0 / mid) >= kd / 8});
}

}  // namespace detail

inline bound_trace theorem_trace(theorem_kind kind, const trace_params& prm) {
    bound_trace tr;
    tr.theorem = kind;
    switch (kind) {
        case theorem_kind::bec:
        case theorem_kind::fast_bec: {
            require_unit_open(prm.p, "theorem trace: erasure probability");
            detail::square_setup(tr, prm.s, prm.t, 1.0 - prm.p);
            tr.rho = 0.5;
            double exit_delta = (1.0 - prm.p - tr.rate_start) / (1.0 - prm.p);
            tr.preconditions.push_back({"(1-p-R(C_0))/(1-p) >= 1/sqrt(2 pi m)", exit_delta >= tr.initial_delta});
            double v = (1 - tr.initial_delta) / tr.initial_delta;
            detail::push_stage(tr, 0, v, "init (1-delta)/delta");
            unsigned odds_steps = kind == theorem_kind::bec ? tr.k : prm.t;
            for (unsigned j = 1; j <= odds_steps; ++j) {
                v /= (2 - tr.rho);
                detail::push_stage(tr, j, v, "bec_odds");
            }
            if (kind == theorem_kind::bec) {
                tr.closed_form = std::pow(2.0 / 3.0, tr.k) * std::sqrt(2 * pi * tr.m);
            } else {
                double mid = v, c = level_k_constant(prm.p);
                for (unsigned j = 1; j <= prm.t; ++j) {
                    if (v < 1.0) {
                        v = level_k_closed(v, 1, prm.p);
                        detail::push_stage(tr, prm.t + j, v, "level_k l=1");
                    } else {
                        detail::push_stage(tr, prm.t + j, v, "level_k l=1 (input vacuous)");
                    }
                }
                double md = tr.m, s = prm.s;
                tr.closed_form = std::exp(-std::sqrt(md) * std::log(std::exp(1.0) * md) / (3 * s));
                tr.preconditions.push_back({"t >= s^2 (6/c)^3", prm.t >= s * s * std::pow(6 / c, 3)});
                tr.preconditions.push_back({"-ln P_e(C_t) >= t/3", mid < 1.0 && -std::log(mid) >= prm.t / 3.0});
            }
            tr.final_bound = v;
            break;
        }
        case theorem_kind::bms: {
            double cap = prm.capacity >= 0 ? prm.capacity : 1.0 - h2(prm.p);
            detail::square_setup(tr, prm.s, prm.t, cap);
            tr.rho = 0.5;
            tr.preconditions.push_back({"C - R(C_0) >= 1/sqrt(2 pi m)", cap - tr.rate_start >= tr.initial_delta});
            double v = (1 - tr.initial_delta) / tr.initial_delta;
            detail::push_stage(tr, 0, v, "init (1-delta)/delta");
            for (unsigned j = 1; j <= tr.k; ++j) {
                v *= (1 + tr.rho) / 2;
                detail::push_stage(tr, j, v, "mmse_odds");
            }
            tr.final_bound = v;
            tr.closed_form = std::pow(0.75, tr.k) * std::sqrt(2 * pi * tr.m);
            break;
        }
        case theorem_kind::fast_bsc: {
            if (prm.r > prm.m) throw parameter_error("fast_bsc: need 0 <= r <= m");
            if (prm.m < 1) throw parameter_error("fast_bsc: m must be positive");
            if (prm.k == 0 || prm.k % 8 != 0) throw parameter_error("fast_bsc: k must be a positive multiple of 8");
            if (!(prm.delta > 0 && prm.delta <= 1)) throw parameter_error("fast_bsc: delta must lie in (0,1]");
            if (!(prm.eta > 0 && prm.eta <= 1)) throw parameter_error("fast_bsc: eta must lie in (0,1]");
            if (prm.m + prm.k > 4096) throw feasibility_error("fast_bsc: m + k above 4096");
            tr.r = prm.r;
            tr.m = prm.m;
            tr.k = prm.k;
            tr.rate_start = to_double(rm_rate_exact(tr.r, tr.m));
            tr.capacity = tr.rate_start + prm.delta;
            if (!(tr.capacity < 1.0)) throw parameter_error("fast_bsc: C = R(C_0) + delta must be below 1");
            tr.rate_end = to_double(rm_rate_exact(tr.r, tr.m + tr.k));
            tr.rate_floor = tr.rate_start - tr.k / (2.0 * std::sqrt(static_cast<double>(tr.m)));
            tr.preconditions.push_back({"R(C_k) >= R(C_0) - k/(2 sqrt m)", tr.rate_end >= tr.rate_floor});
            tr.initial_delta = prm.delta;
            detail::bsc_stages(tr, detail::bsc_crossover_for_capacity(tr.capacity), prm.eta);
            break;
        }
        case theorem_kind::corollary_bsc: {
            require(prm.p > 0.0 && prm.p < 0.5, "corollary_bsc: crossover must lie in (0,1/2)");
            if (prm.t % 4 != 0) throw parameter_error("corollary_bsc: t must be divisible by 4");
            detail::square_setup(tr, prm.s, prm.t, 1.0 - h2(prm.p));
            tr.preconditions.push_back({"C - R(C_0) >= 1/sqrt(2 pi m)", tr.capacity - tr.rate_start >= tr.initial_delta});
            double eta = 1.0 / prm.s;
            detail::bsc_stages(tr, prm.p, eta);
            double md = tr.m;
            tr.closed_form_alt = tr.closed_form;
            tr.closed_form = std::exp(-std::sqrt(md) * std::log(std::exp(1.0) * md) / (8.0 * prm.s));
            break;
        }
    }
    return tr;
}

// ---- list ball and transfer -------------------------------------------------------

struct list_ball_record {
    double radius = 0, prob_bound = 0;
};

inline list_ball_record list_ball_bound(double q) {
    require(q >= 0.0 && q <= 1.0, "list_ball_bound: Q must lie in [0,1]");
    return {std::sqrt(q), std::sqrt(q)};
}

struct transfer_params {
    double n = 0;      // block length
    double d = 0;      // minimum distance
    double p = 0;      // BSC parameter
    double theta = 0;  // transition midpoint
    double kappa = 0;  // d = kappa^2 ln N; derived from (N, d) when zero
};

struct transfer_record {
    double alpha = 0, tz_bound = 0, p_theta_gap = 0, width = 0, kappa = 0, p_low = 0;
    double bms_capacity_threshold = 0;
    double bms_block_bound = 0;       // 1/N + h(1/N^2)
    double bms_block_simplified = 0;  // 1/N, valid for N >= 8
    double bms_block_stated = 0;      // 2/N^2
    bool simplified_valid = false;
};

inline double transfer_alpha(double d, double theta, double p) {
    return std::sqrt(d) * (std::sqrt(-std::log(1 - theta)) - std::sqrt(-std::log(1 - p)));
}

inline double transfer_width(double d, double delta) {
    return 4 * std::sqrt(2 * std::log(2.0)) * std::sqrt(std::log(1 / delta) / d);
}

inline transfer_record tz_sasoglu_transfer(const transfer_params& prm, double delta) {
    require(prm.n > 0 && prm.d > 0, "transfer: N and d must be positive");
    require(prm.p > 0 && prm.p <= 0.5, "transfer: p must lie in (0,1/2]");
    require(prm.theta > 0 && prm.theta <= 0.5, "transfer: theta must lie in (0,1/2]");
    require(delta > 0 && delta < 1, "transfer: delta must lie in (0,1)");
    transfer_record t;
    t.alpha = transfer_alpha(prm.d, prm.theta, prm.p);
    t.tz_bound = 1 - gauss_cdf(t.alpha);
    t.p_theta_gap = 2 * std::sqrt(std::log(2.0)) * std::abs(t.alpha) / std::sqrt(prm.d);
    t.width = transfer_width(prm.d, delta);
    if (prm.kappa > 0) {
        t.kappa = prm.kappa;
    } else {
        require(prm.n > 1, "transfer: kappa needs N > 1");
        t.kappa = std::sqrt(prm.d / std::log(prm.n));
    }
    t.p_low = prm.p - 8 * std::sqrt(std::log(2.0)) / t.kappa;
    t.bms_capacity_threshold = 1 - h2(std::max(t.p_low, 0.0));
    double inv_n = 1 / prm.n;
    t.bms_block_bound = inv_n + h2(inv_n * inv_n);
    t.bms_block_simplified = inv_n;
    t.bms_block_stated = 2 * inv_n * inv_n;
    t.simplified_valid = prm.n >= 8;
    return t;
}

}  // namespace rmnest
