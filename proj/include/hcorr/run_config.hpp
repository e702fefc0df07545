#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcorr {

/// Flat key = value run configuration. Keys mirror the command-line flags
/// (without the leading dashes); '#' starts a comment line.
class RunConfig {
public:
    static const std::vector<std::string>& known_keys() {
        static const std::vector<std::string> keys = {
            "delta", "eps",   "eta",   "family", "frequency", "grid",   "input", "inside-set", "interval",
            "l",     "l-list", "lambda-count", "level", "m-cap", "n", "n-max", "out", "r", "seed",
            "set",   "stages", "t",     "test-interval", "xi"};
        return keys;
    }
    static bool is_known(const std::string& key) {
        const auto& k = known_keys();
        return std::find(k.begin(), k.end(), key) != k.end();
    }

    static RunConfig parse(const std::string& text) {
        RunConfig c;
        std::istringstream in(text);
        std::string line;
        int no = 0;
        while (std::getline(in, line)) {
            ++no;
            auto s = trim(line);
            if (s.empty() || s[0] == '#') continue;
            auto eq = s.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(no) + ": expected key = value");
            std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
            if (!is_known(key)) throw std::invalid_argument("config line " + std::to_string(no) + ": unknown key '" + key + "'");
            c.values_[key] = value;
        }
        return c;
    }

    std::string serialize() const {
        std::string out;
        for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
        return out;
    }

    void set(const std::string& key, const std::string& value) {
        if (!is_known(key)) throw std::invalid_argument("unknown config key '" + key + "'");
        values_[key] = value;
    }
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }
    /// Sets key only when absent.
    void set_default(const std::string& key, const std::string& value) {
        if (!has(key)) set(key, value);
    }
    /// Entries of other win.
    void merge(const RunConfig& other) {
        for (const auto& [k, v] : other.values_) values_[k] = v;
    }
    const std::map<std::string, std::string>& values() const { return values_; }

    friend bool operator==(const RunConfig& x, const RunConfig& y) { return x.values_ == y.values_; }

private:
    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> values_;
};

}  // namespace hcorr
