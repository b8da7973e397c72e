#pragma once

// Flat key=value configuration. '#' starts a comment, blank lines are
// skipped, later assignments win. Consumers declare the keys they accept;
// anything else is rejected so typos fail loudly. The GECW_CONFIG
// environment variable names a config file to load when no explicit path is
// given.

#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "gecw/util.hpp"

namespace gecw {

class Config {
public:
    Config() = default;

    static Config parse(std::string_view text) {
        Config cfg;
        std::size_t lineno = 0;
        for (std::string& line : split_on(text, '\n')) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            std::size_t eq = line.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ParseError("expected key=value", lineno);
            cfg.values_[line.substr(0, eq)] = line.substr(eq + 1);
        }
        return cfg;
    }

    static Config load_file(const std::string& path) { return parse(read_file(path)); }

    // Loads the path from GECW_CONFIG if set, otherwise an empty config.
    static Config from_environment() {
        const char* path = std::getenv("GECW_CONFIG");
        return path && *path ? load_file(path) : Config{};
    }

    bool empty() const noexcept { return values_.empty(); }

    std::optional<std::string> get(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    std::string get_string(const std::string& key, std::string fallback) const {
        auto v = get(key);
        return v ? *v : std::move(fallback);
    }

    double get_double(const std::string& key, double fallback) const {
        auto v = get(key);
        if (!v) return fallback;
        try {
            std::size_t used = 0;
            double r = std::stod(*v, &used);
            if (used != v->size()) throw std::invalid_argument("");
            return r;
        } catch (const std::exception&) {
            throw ValidationError("config key " + key + " is not a number: '" + *v + "'");
        }
    }

    long long get_int(const std::string& key, long long fallback) const {
        auto v = get(key);
        if (!v) return fallback;
        try {
            std::size_t used = 0;
            long long r = std::stoll(*v, &used);
            if (used != v->size()) throw std::invalid_argument("");
            return r;
        } catch (const std::exception&) {
            throw ValidationError("config key " + key + " is not an integer: '" + *v + "'");
        }
    }

    bool get_bool(const std::string& key, bool fallback) const {
        auto v = get(key);
        if (!v) return fallback;
        if (*v == "true" || *v == "1") return true;
        if (*v == "false" || *v == "0") return false;
        throw ValidationError("config key " + key + " is not a boolean: '" + *v + "'");
    }

    // Throws on keys outside the accepted set.
    void restrict_keys(const std::set<std::string>& allowed) const {
        for (const auto& [key, value] : values_)
            if (!allowed.count(key))
                throw ValidationError("unknown config key '" + key + "'");
    }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace gecw
