#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace singlab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class KeyKind { integer, real, real_list, choice, flag };

struct KeySpec {
  std::string section;
  std::string key;
  KeyKind kind = KeyKind::real;
  std::string fallback;
  std::string doc;
  std::vector<std::string> choices;
  double lo = -1e300, hi = 1e300;
  bool positive = false;
};

/// Every accepted key, in canonical order.
const std::vector<KeySpec>& config_schema();

/// Sectioned key = value text.  '#' and ';' start comments.  Unknown
/// sections or keys and out-of-range values raise ConfigError.
class Config {
 public:
  /// All defaults.
  Config();

  static Config parse(std::string_view text);
  static Config load(const std::string& path);

  /// `section.key=value`.
  void apply_override(std::string_view assignment);
  void set(const std::string& section, const std::string& key, const std::string& value);

  std::string text(const std::string& section, const std::string& key) const;
  double real(const std::string& section, const std::string& key) const;
  int integer(const std::string& section, const std::string& key) const;
  bool flag(const std::string& section, const std::string& key) const;
  std::vector<double> reals(const std::string& section, const std::string& key) const;

  /// Normalized text; parse(canonical()).canonical() == canonical().
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), 16 hex digits.
  std::string hash() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Defaults with one line of documentation per key.
std::string config_reference();

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace singlab
