#pragma once

#include <map>
#include <set>
#include <string>

namespace fracsheet {

/// Plain key=value file: one pair per line, '#' comments, blank lines
/// ignored. Throws ConfigError on malformed lines or unreadable files.
std::map<std::string, std::string> parse_config_file(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Throws ConfigError listing the valid keys when `cfg` contains a key
/// outside `valid`.
void reject_unknown_keys(const std::map<std::string, std::string>& cfg,
                         const std::set<std::string>& valid);

double config_double(const std::map<std::string, std::string>& cfg, const std::string& key,
                     double fallback);
long config_long(const std::map<std::string, std::string>& cfg, const std::string& key,
                 long fallback);
std::string config_string(const std::map<std::string, std::string>& cfg, const std::string& key,
                          const std::string& fallback);

}  // namespace fracsheet
