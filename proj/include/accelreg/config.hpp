#pragma once

// Flat key=value run configuration. One setting per line, '#' starts a
// comment line, surrounding whitespace is ignored. Keys are
// [A-Za-z0-9_.-]+; values are single-line strings.

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace accelreg {

class RunConfig {
 public:
  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::filesystem::path& path);

  // Sorted by key, one "key=value\n" line each.
  std::string serialize() const;

  // Overwrites any existing value.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const { return values_; }

  // Typed getters throw DomainError naming the key when the value does not
  // parse. The fallback is returned for absent keys.
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Comma-separated list with blank items removed.
  std::vector<std::string> get_list(const std::string& key,
                                    const std::vector<std::string>& fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;

  // Throws DomainError for any key outside `known`.
  void require_known(std::span<const std::string_view> known) const;

  bool operator==(const RunConfig&) const = default;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace accelreg
