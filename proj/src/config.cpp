#include "mslab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mslab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::string RunConfig::get_string(const std::string& key,
                                  const std::string& fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  char* end = nullptr;
  double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str() || *end != '\0')
    throw std::runtime_error("config: key '" + key + "' is not a number: " + it->second);
  return v;
}

long RunConfig::get_long(const std::string& key, long fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  char* end = nullptr;
  long v = std::strtol(it->second.c_str(), &end, 10);
  if (end == it->second.c_str() || *end != '\0')
    throw std::runtime_error("config: key '" + key + "' is not an integer: " + it->second);
  return v;
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  for (const auto& [k, v] : kv) os << k << '=' << v << '\n';  // map is sorted
  return os.str();
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical()); }

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot read " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: " + path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    cfg.kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return cfg;
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    auto eq = o.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: override '" + o + "' is not key=value");
    cfg.kv[trim(o.substr(0, eq))] = trim(o.substr(eq + 1));
  }
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace mslab
