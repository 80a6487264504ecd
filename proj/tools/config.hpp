// key=value run configuration: one pair per line, '#' starts a comment.
#ifndef LATMIX_TOOLS_CONFIG_HPP
#define LATMIX_TOOLS_CONFIG_HPP

#include "latmix/core.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace latmix::cli {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;  // commas inside parentheses stay
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

class Config {
 public:
  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  static Config parse(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw Error(ErrorKind::Parse, "config line " + std::to_string(n) + ": expected key=value");
      const std::string key = trim(line.substr(0, eq));
      if (key.empty()) throw Error(ErrorKind::Parse, "config line " + std::to_string(n) + ": empty key");
      if (!c.values_.emplace(key, trim(line.substr(eq + 1))).second)
        throw Error(ErrorKind::Parse, "duplicate config key '" + key + "'");
    }
    return c;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string str(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }
  std::string str(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw Error(ErrorKind::Parse, "missing config key '" + key + "'");
    return it->second;
  }

  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return to_real_value(key, str(key));
  }
  double real(const std::string& key) const { return to_real_value(key, str(key)); }
  long integer(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    return to_integer(key, str(key));
  }
  long integer(const std::string& key) const { return to_integer(key, str(key)); }

  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    for (const auto& s : split(str(key), ',')) out.push_back(to_real_value(key, s));
    return out;
  }

  /// Throws parse on the first key outside the allowed set.
  void check_keys(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : values_)
      if (!allowed.count(k)) throw Error(ErrorKind::Parse, "unknown config key '" + k + "'");
  }

  /// Sorted key=value lines, the input of the config hash.
  std::string canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
    return out;
  }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  static double to_real_value(const std::string& key, const std::string& s) {
    try {
      std::size_t pos = 0;
      const double x = std::stod(s, &pos);
      if (pos == s.size()) return x;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::Parse, "config key '" + key + "': not a number: '" + s + "'");
  }
  static long to_integer(const std::string& key, const std::string& s) {
    try {
      std::size_t pos = 0;
      const long x = std::stol(s, &pos);
      if (pos == s.size()) return x;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::Parse, "config key '" + key + "': not an integer: '" + s + "'");
  }

  std::map<std::string, std::string> values_;
};

}  // namespace latmix::cli

#endif  // LATMIX_TOOLS_CONFIG_HPP
