/// Flat key=value run configuration with dotted namespaces, chosen for
/// diff-ability in the result catalog. Canonicalization sorts keys; the config
/// hash is FNV-1a over the canonical text.
#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fujita/numerics.hpp"

namespace fujita {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class RunConfig {
public:
    RunConfig() = default;

    static RunConfig parse_string(const std::string& text) {
        RunConfig cfg;
        std::istringstream is(text);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const std::string trimmed = trim(line);
            if (trimmed.empty() || trimmed[0] == '#') continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ConfigError("malformed config line " + std::to_string(lineno) + ": '" +
                                  trimmed + "' (expected key=value)");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw ConfigError("malformed config line " + std::to_string(lineno) +
                                  ": empty key");
            cfg.values_[key] = value;
        }
        return cfg;
    }

    static RunConfig parse_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw ConfigError("cannot open config file: " + path);
        std::ostringstream buf;
        buf << is.rdbuf();
        return parse_string(buf.str());
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, std::optional<std::string> fallback = {}) const {
        auto it = values_.find(key);
        if (it != values_.end()) return it->second;
        if (fallback) return *fallback;
        throw ConfigError("missing config key: " + key);
    }

    double get_double(const std::string& key, std::optional<double> fallback = {}) const {
        auto it = values_.find(key);
        if (it == values_.end()) {
            if (fallback) return *fallback;
            throw ConfigError("missing config key: " + key);
        }
        return parse_double(key, it->second);
    }

    long get_int(const std::string& key, std::optional<long> fallback = {}) const {
        auto it = values_.find(key);
        if (it == values_.end()) {
            if (fallback) return *fallback;
            throw ConfigError("missing config key: " + key);
        }
        long out = 0;
        const auto& s = it->second;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw ConfigError("malformed config key " + key + ": '" + s + "' is not an integer");
        return out;
    }

    bool get_bool(const std::string& key, std::optional<bool> fallback = {}) const {
        auto it = values_.find(key);
        if (it == values_.end()) {
            if (fallback) return *fallback;
            throw ConfigError("missing config key: " + key);
        }
        const std::string& s = it->second;
        if (s == "1" || s == "true" || s == "on" || s == "yes") return true;
        if (s == "0" || s == "false" || s == "off" || s == "no") return false;
        throw ConfigError("malformed config key " + key + ": '" + s + "' is not a boolean");
    }

    std::vector<double> get_double_list(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("missing config key: " + key);
        std::vector<double> out;
        std::string_view rest = it->second;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view tok = rest.substr(0, comma);
            out.push_back(parse_double(key, std::string(trim(std::string(tok)))));
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        if (out.empty()) throw ConfigError("config key " + key + " holds an empty list");
        return out;
    }

    /// Sorted key=value rendering; identical configs canonicalize identically.
    std::string canonical_string() const {
        std::string out;
        for (const auto& [k, v] : values_) {
            out += k;
            out += '=';
            out += v;
            out += '\n';
        }
        return out;
    }

    std::uint64_t hash() const { return fnv1a64(canonical_string()); }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    static double parse_double(const std::string& key, const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("trailing junk");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("malformed config key " + key + ": '" + s + "' is not a number");
        }
    }

    std::map<std::string, std::string> values_;  // ordered for canonicalization
};

}  // namespace fujita
