#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rmnest/errors.hpp"

namespace rmnest {

inline constexpr const char* tool_version = "0.3.0";

// ---- config files -------------------------------------------------------------------

class config_error : public parameter_error {
public:
    config_error(std::size_t line, const std::string& msg)
        : parameter_error("config line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct config_entry {
    std::string value;
    std::size_t line = 0;
};

/// Flat key = value text; '#' starts a comment.
struct experiment_config {
    std::map<std::string, config_entry> entries;
    std::string text;

    bool has(const std::string& k) const { return entries.count(k) != 0; }
    std::string get(const std::string& k, const std::string& fallback = "") const {
        auto it = entries.find(k);
        return it == entries.end() ? fallback : it->second.value;
    }
    std::size_t line_of(const std::string& k) const {
        auto it = entries.find(k);
        return it == entries.end() ? 0 : it->second.line;
    }
};

inline experiment_config parse_config(const std::string& text) {
    experiment_config cfg;
    cfg.text = text;
    std::istringstream is(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(is, raw)) {
        ++line;
        auto hash = raw.find('#');
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        auto eq = s.find('=');
        if (eq == std::string::npos) throw config_error(line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
        if (key.empty()) throw config_error(line, "empty key");
        if (cfg.entries.count(key)) throw config_error(line, "duplicate key '" + key + "'");
        cfg.entries[key] = {value, line};
    }
    return cfg;
}

inline experiment_config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parameter_error("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// ---- result tables ------------------------------------------------------------------

using cell = std::variant<std::string, double, std::int64_t, bool>;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string cell_text(const cell& c) {
    if (auto s = std::get_if<std::string>(&c)) return *s;
    if (auto d = std::get_if<double>(&c)) return format_double(*d);
    if (auto i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<bool>(c) ? "true" : "false";
}

struct result_table {
    std::vector<std::string> columns;
    std::vector<std::vector<cell>> rows;
    std::vector<std::pair<std::string, cell>> meta;  // insertion order kept

    void add_row(std::vector<cell> r) {
        if (r.size() != columns.size()) throw parameter_error("result row width mismatch");
        rows.push_back(std::move(r));
    }
    void set_meta(const std::string& k, cell v) {
        for (auto& [key, val] : meta)
            if (key == k) {
                val = std::move(v);
                return;
            }
        meta.emplace_back(k, std::move(v));
    }
    const cell* find_meta(const std::string& k) const {
        for (const auto& [key, val] : meta)
            if (key == k) return &val;
        return nullptr;
    }
};

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

/// Provenance and meta entries as '# key=value' lines, then the header row.
inline void write_csv(std::ostream& os, const result_table& t) {
    for (const auto& [k, v] : t.meta) os << "# " << k << '=' << cell_text(v) << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_escape(cell_text(r[i]));
        os << '\n';
    }
}

inline nlohmann::ordered_json cell_json(const cell& c) {
    if (auto s = std::get_if<std::string>(&c)) return *s;
    if (auto d = std::get_if<double>(&c)) {
        if (!std::isfinite(*d)) return format_double(*d);
        return *d;
    }
    if (auto i = std::get_if<std::int64_t>(&c)) return *i;
    return std::get<bool>(c);
}

inline void write_json(std::ostream& os, const result_table& t) {
    nlohmann::ordered_json doc;
    doc["meta"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.meta) doc["meta"][k] = cell_json(v);
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        nlohmann::ordered_json o;
        for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = cell_json(r[i]);
        doc["rows"].push_back(std::move(o));
    }
    os << doc.dump(2) << '\n';
}

inline std::string render(const result_table& t, const std::string& format) {
    std::ostringstream os;
    if (format == "csv") write_csv(os, t);
    else if (format == "json") write_json(os, t);
    else throw parameter_error("format: expected csv or json, got '" + format + "'");
    return os.str();
}

}  // namespace rmnest
