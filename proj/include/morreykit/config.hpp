#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace morreykit {

/// Flat key-value configuration with [section] headers, TOML-style. Values
/// are kept as typed scalars (string, number, bool). Parsing then serializing
/// then parsing again is the identity on the typed content.
class Config {
 public:
  static Config parse(const std::string& text);
  std::string serialize() const;

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_number(const std::string& section, const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key,
                       std::int64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

  void set_string(const std::string& section, const std::string& key, const std::string& v);
  void set_number(const std::string& section, const std::string& key, double v);
  void set_int(const std::string& section, const std::string& key, std::int64_t v);
  void set_bool(const std::string& section, const std::string& key, bool v);

  bool operator==(const Config& other) const { return entries_ == other.entries_; }

 private:
  struct Value {
    enum class Kind { string, number, integer, boolean } kind = Kind::string;
    std::string s;
    double d = 0;
    std::int64_t i = 0;
    bool b = false;
    bool operator==(const Value&) const = default;
  };
  // section -> key -> value, both levels ordered
  std::map<std::string, std::map<std::string, Value>> entries_;
  const Value* find(const std::string& section, const std::string& key) const;
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 42;
  int resolution = 0;        // 0 = suite default
  double tol_scale = 1.0;
  std::string out_dir;       // empty = no files written
  Config raw;                // full parsed config for suite-specific knobs

  static ExperimentConfig from_config(const Config& c);
  Config to_config() const;
};

}  // namespace morreykit
