#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rmnest/errors.hpp"
#include "rmnest/rng.hpp"

namespace rmnest {

/// Binary entropy in bits; h(0) = h(1) = 0.
inline double h2(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -(p * std::log(p) + (1.0 - p) * std::log1p(-p)) / std::log(2.0);
}

enum class channel_kind { bec, bsc, bms };

struct noise_symbol {
    double value;
    double prob;
};

/// Binary memoryless symmetric channel as Y = X * Z with X in {+1,-1}.
class channel_model {
public:
    static channel_model bec(double p) {
        require(p >= 0.0 && p <= 1.0, "bec: p outside [0,1]");
        return channel_model(channel_kind::bec, p, {{1.0, 1.0 - p}, {0.0, p}, {-1.0, 0.0}});
    }
    static channel_model bsc(double p) {
        require(p >= 0.0 && p <= 1.0, "bsc: p outside [0,1]");
        return channel_model(channel_kind::bsc, p, {{1.0, 1.0 - p}, {-1.0, p}});
    }
    static channel_model discrete_bms(std::vector<noise_symbol> law) {
        return channel_model(channel_kind::bms, std::nan(""), std::move(law));
    }

    channel_kind kind() const { return kind_; }
    /// Parameter of BEC/BSC; NaN for a general law.
    double p() const { return p_; }
    const std::vector<noise_symbol>& symbols() const { return law_; }
    double capacity() const { return capacity_; }

    /// Pr(Z = z); 0 for values outside the alphabet.
    double prob(double z) const {
        for (const auto& s : law_)
            if (s.value == z) return s.prob;
        return 0.0;
    }
    std::size_t symbol_index(double z) const {
        for (std::size_t i = 0; i < law_.size(); ++i)
            if (law_[i].value == z) return i;
        throw parameter_error("channel: value outside alphabet");
    }

    double sample_noise(counter_rng& rng) const {
        double u = rng.uniform();
        double acc = 0.0;
        const noise_symbol* last = nullptr;
        for (const auto& s : law_) {
            if (s.prob <= 0.0) continue;
            acc += s.prob;
            last = &s;
            if (u < acc) return s.value;
        }
        return last->value;
    }

    std::string describe() const {
        auto num = [](double v) {
            char buf[32];
            auto res = std::to_chars(buf, buf + sizeof buf, v);
            return std::string(buf, res.ptr);
        };
        if (kind_ == channel_kind::bec) return "bec " + num(p_);
        if (kind_ == channel_kind::bsc) return "bsc " + num(p_);
        std::string s = "bms ";
        for (std::size_t i = 0; i < law_.size(); ++i) s += (i ? "," : "") + num(law_[i].value) + ':' + num(law_[i].prob);
        return s;
    }

private:
    channel_model(channel_kind k, double p, std::vector<noise_symbol> law)
        : kind_(k), p_(p), law_(std::move(law)) {
        require(!law_.empty(), "channel: empty symbol law");
        double total = 0.0;
        for (const auto& s : law_) {
            require(std::isfinite(s.value), "channel: non-finite symbol value");
            require(s.prob >= 0.0 && s.prob <= 1.0, "channel: probability outside [0,1]");
            total += s.prob;
        }
        require(std::abs(total - 1.0) <= 1e-12, "channel: probabilities do not sum to 1");
        for (std::size_t i = 0; i < law_.size(); ++i)
            for (std::size_t j = i + 1; j < law_.size(); ++j)
                require(law_[i].value != law_[j].value, "channel: duplicate symbol value");
        for (const auto& s : law_) {
            bool found = false;
            for (const auto& o : law_) found = found || o.value == -s.value;
            if (!found) throw symmetry_error("channel: symbol list not closed under negation");
        }
        if (kind_ == channel_kind::bec) capacity_ = 1.0 - p_;
        else if (kind_ == channel_kind::bsc) capacity_ = 1.0 - h2(p_);
        else capacity_ = mutual_information();
    }

    double mutual_information() const {
        double mi = 0.0;
        for (const auto& s : law_) {
            if (s.value == 0.0) continue;
            // output y = s.value: Pr(y|+1) = P(s.value), Pr(y|-1) = P(-s.value)
            double a = s.prob, b = prob(-s.value), py = 0.5 * (a + b);
            if (a > 0.0) mi += 0.5 * a * std::log2(a / py);
            if (b > 0.0) mi += 0.5 * b * std::log2(b / py);
        }
        return std::clamp(mi, 0.0, 1.0);
    }

    channel_kind kind_;
    double p_;
    std::vector<noise_symbol> law_;
    double capacity_ = 0.0;
};

/// W followed by an erasure channel with erasure probability t.
inline channel_model erasure_cascade(const channel_model& ch, double t) {
    require(t >= 0.0 && t <= 1.0, "erasure_cascade: t outside [0,1]");
    std::vector<noise_symbol> law;
    bool has_zero = false;
    for (const auto& s : ch.symbols()) {
        if (s.value == 0.0) {
            law.push_back({0.0, s.prob * (1.0 - t) + t});
            has_zero = true;
        } else {
            law.push_back({s.value, s.prob * (1.0 - t)});
        }
    }
    if (!has_zero) law.push_back({0.0, t});
    return channel_model::discrete_bms(std::move(law));
}

/// Parses "bec p", "bsc p" or "bms z1:q1,z2:q2,...".
inline channel_model make_channel(const std::string& spec) {
    std::istringstream is(spec);
    std::string kind;
    is >> kind;
    std::transform(kind.begin(), kind.end(), kind.begin(), [](unsigned char c) { return std::tolower(c); });
    std::string rest;
    std::getline(is, rest);
    rest.erase(0, rest.find_first_not_of(" \t"));
    rest.erase(rest.find_last_not_of(" \t") + 1);
    auto parse_num = [&](const std::string& s) {
        std::size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw parameter_error("channel spec: bad number '" + s + "'");
        }
        if (pos != s.size()) throw parameter_error("channel spec: bad number '" + s + "'");
        return v;
    };
    if (kind == "bec") return channel_model::bec(parse_num(rest));
    if (kind == "bsc") return channel_model::bsc(parse_num(rest));
    if (kind == "bms") {
        std::vector<noise_symbol> law;
        std::istringstream items(rest);
        std::string item;
        while (std::getline(items, item, ',')) {
            auto colon = item.find(':');
            if (colon == std::string::npos) throw parameter_error("channel spec: expected value:prob in '" + item + "'");
            law.push_back({parse_num(item.substr(0, colon)), parse_num(item.substr(colon + 1))});
        }
        return channel_model::discrete_bms(std::move(law));
    }
    throw parameter_error("channel spec: unknown kind '" + kind + "'");
}

}  // namespace rmnest
