#include "fracsheet/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fracsheet/errors.hpp"

namespace fracsheet {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (cfg.count(key)) throw ConfigError("config: duplicate key '" + key + "'");
        cfg[key] = val;
    }
    return cfg;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void reject_unknown_keys(const std::map<std::string, std::string>& cfg,
                         const std::set<std::string>& valid) {
    for (const auto& [key, _] : cfg) {
        if (!valid.count(key)) {
            std::string msg = "unknown config key '" + key + "'; valid keys:";
            for (const auto& v : valid) msg += " " + v;
            throw ConfigError(msg);
        }
    }
}

double config_double(const std::map<std::string, std::string>& cfg, const std::string& key,
                     double fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    double v;
    const auto& s = it->second;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError("config key '" + key + "': bad number '" + s + "'");
    return v;
}

long config_long(const std::map<std::string, std::string>& cfg, const std::string& key,
                 long fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    long v;
    const auto& s = it->second;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError("config key '" + key + "': bad integer '" + s + "'");
    return v;
}

std::string config_string(const std::map<std::string, std::string>& cfg, const std::string& key,
                          const std::string& fallback) {
    const auto it = cfg.find(key);
    return it == cfg.end() ? fallback : it->second;
}

}  // namespace fracsheet
