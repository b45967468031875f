#pragma once

#include <map>
#include <string>

namespace eqft {

/// Flat "key = value" configuration with [section] grouping. Keys are
/// addressed as "section.key". Serialization is canonical (sections and keys
/// in sorted order), so configs round-trip bit-exactly through
/// serialize/parse.
class ExperimentConfig {
 public:
  static ExperimentConfig defaults();
  /// Throws std::invalid_argument naming the offending line/field.
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load_file(const std::string& path);

  std::string serialize() const;

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::string& str(const std::string& key) const;
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  void set(const std::string& key, double value);
  void set(const std::string& key, int value);

  const std::map<std::string, std::string>& entries() const { return values_; }

  bool operator==(const ExperimentConfig&) const = default;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace eqft
