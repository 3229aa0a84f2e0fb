#pragma once

#include <map>
#include <variant>

#include "spincal/types.hpp"

namespace spincal {

/// JSON value with deterministic serialization: object keys sorted, floats
/// printed with 17 significant digits, no locale dependence.
class JsonValue {
 public:
  using Object = std::map<std::string, JsonValue>;
  using Array = std::vector<JsonValue>;

  JsonValue() : v_(nullptr) {}
  JsonValue(std::nullptr_t) : v_(nullptr) {}
  JsonValue(bool b) : v_(b) {}
  JsonValue(double d) : v_(d) {}
  JsonValue(int i) : v_(static_cast<long long>(i)) {}
  JsonValue(long long i) : v_(i) {}
  JsonValue(unsigned long long i) : v_(static_cast<long long>(i)) {}
  JsonValue(const char* s) : v_(std::string(s)) {}
  JsonValue(std::string s) : v_(std::move(s)) {}
  JsonValue(Object o) : v_(std::move(o)) {}
  JsonValue(Array a) : v_(std::move(a)) {}

  JsonValue& operator[](const std::string& key);
  void push_back(JsonValue v);

  std::string dump(int indent = 0) const;

 private:
  void dump_to(std::string& out, int indent, int depth) const;
  std::variant<std::nullptr_t, bool, long long, double, std::string, Object, Array> v_;
};

struct CheckRecord {
  std::string identity;  // stable slug, e.g. "gauss.spinorial"
  std::string anchor;    // short description of the identity checked
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  int samples = 0;

  JsonValue to_json() const;
};

struct Report {
  std::string tool_version;
  JsonValue config_echo;
  std::vector<CheckRecord> checks;
  JsonValue extra;  // command-specific payload
  double elapsed_seconds = 0.0;

  int pass_count() const;
  bool all_pass() const;
  double worst_residual() const;
  JsonValue to_json(bool include_timing = true) const;
};

/// Writes dump+newline atomically (temp file in the same directory, rename).
void write_report_atomic(const std::string& path, const Report& report);

extern const char* kToolVersion;

}  // namespace spincal
