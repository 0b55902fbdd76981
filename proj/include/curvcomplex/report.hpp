// Ordered key/value run reports with text and JSON renderings.

#pragma once

#include "curvcomplex/optimize.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace curvcomplex {

class Report {
 public:
  using Value = std::variant<std::string, double, std::int64_t, bool, std::vector<double>>;

  /// Replaces an existing key in place, otherwise appends.
  void set(const std::string& key, Value value);
  void set(const std::string& key, const char* value) { set(key, Value(std::string(value))); }
  void set(const std::string& key, const std::string& value) { set(key, Value(value)); }
  void set(const std::string& key, double value) { set(key, Value(value)); }
  void set(const std::string& key, bool value) { set(key, Value(value)); }
  void set(const std::string& key, int value) { set(key, Value(static_cast<std::int64_t>(value))); }
  void set(const std::string& key, std::int64_t value) { set(key, Value(value)); }
  void set(const std::string& key, const std::vector<double>& value) { set(key, Value(value)); }

  const Value* find(const std::string& key) const;
  double number(const std::string& key) const;
  const std::vector<std::pair<std::string, Value>>& entries() const { return entries_; }

  /// One "key = value" line per entry.
  std::string to_text() const;
  /// A single JSON object, keys in insertion order.
  std::string to_json() const;

  /// Appends every entry of `other` under `prefix`.
  void merge(const Report& other, const std::string& prefix = {});

 private:
  std::vector<std::pair<std::string, Value>> entries_;
};

/// Shortest decimal that reads back to the same double.
std::string format_number(double v);

/// Energy decomposition, bounds and solver statistics of a pipeline run.
Report energy_report(const SegmentationResult& result);

}  // namespace curvcomplex
