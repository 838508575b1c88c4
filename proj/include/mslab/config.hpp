// Flat key=value run configuration ('#' comments, blank lines ignored) with
// typed getters, override support, and an FNV-1a hash of the canonicalized
// content. The hash is embedded in every CSV/JSON the tools emit so outputs
// can be traced back to the exact configuration that produced them.
#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mslab {

struct RunConfig {
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;

  // Sorted "key=value" lines joined by '\n' (the hash input).
  std::string canonical() const;
  std::uint64_t hash() const;
};

// Parse from a file; throws std::runtime_error on unreadable file or a
// malformed line (no '=').
RunConfig load_config(const std::string& path);

// Parse "key=value" override strings on top of an existing config.
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides);

std::uint64_t fnv1a64(const std::string& data);

}  // namespace mslab
