#include "spincal/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace spincal {

const char* kToolVersion = "spincal 0.1.0";

JsonValue& JsonValue::operator[](const std::string& key) {
  if (!std::holds_alternative<Object>(v_)) v_ = Object{};
  return std::get<Object>(v_)[key];
}

void JsonValue::push_back(JsonValue v) {
  if (!std::holds_alternative<Array>(v_)) v_ = Array{};
  std::get<Array>(v_).push_back(std::move(v));
}

namespace {

void escape_to(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void indent_to(std::string& out, int indent, int depth) {
  if (indent <= 0) return;
  out += '\n';
  out.append(static_cast<size_t>(indent) * depth, ' ');
}

}  // namespace

void JsonValue::dump_to(std::string& out, int indent, int depth) const {
  if (std::holds_alternative<std::nullptr_t>(v_)) {
    out += "null";
  } else if (std::holds_alternative<bool>(v_)) {
    out += std::get<bool>(v_) ? "true" : "false";
  } else if (std::holds_alternative<long long>(v_)) {
    out += std::to_string(std::get<long long>(v_));
  } else if (std::holds_alternative<double>(v_)) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(v_));
    out += buf;
  } else if (std::holds_alternative<std::string>(v_)) {
    escape_to(out, std::get<std::string>(v_));
  } else if (std::holds_alternative<Object>(v_)) {
    const Object& o = std::get<Object>(v_);
    if (o.empty()) {
      out += "{}";
      return;
    }
    out += '{';
    bool first = true;
    for (const auto& [k, val] : o) {
      if (!first) out += ',';
      first = false;
      indent_to(out, indent, depth + 1);
      escape_to(out, k);
      out += indent > 0 ? ": " : ":";
      val.dump_to(out, indent, depth + 1);
    }
    indent_to(out, indent, depth);
    out += '}';
  } else {
    const Array& a = std::get<Array>(v_);
    if (a.empty()) {
      out += "[]";
      return;
    }
    out += '[';
    bool first = true;
    for (const auto& val : a) {
      if (!first) out += ',';
      first = false;
      indent_to(out, indent, depth + 1);
      val.dump_to(out, indent, depth + 1);
    }
    indent_to(out, indent, depth);
    out += ']';
  }
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  dump_to(out, indent, 0);
  return out;
}

JsonValue CheckRecord::to_json() const {
  JsonValue j;
  j["identity"] = identity;
  j["anchor"] = anchor;
  j["residual"] = residual;
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  j["samples"] = samples;
  return j;
}

int Report::pass_count() const {
  int c = 0;
  for (const auto& r : checks)
    if (r.pass) ++c;
  return c;
}

bool Report::all_pass() const { return pass_count() == static_cast<int>(checks.size()); }

double Report::worst_residual() const {
  double worst = 0.0;
  for (const auto& r : checks) worst = std::max(worst, r.residual);
  return worst;
}

JsonValue Report::to_json(bool include_timing) const {
  JsonValue j;
  j["version"] = tool_version.empty() ? kToolVersion : tool_version;
  j["config"] = config_echo;
  JsonValue arr{JsonValue::Array{}};
  for (const auto& r : checks) arr.push_back(r.to_json());
  j["checks"] = arr;
  JsonValue summary;
  summary["pass_count"] = pass_count();
  summary["check_count"] = static_cast<long long>(checks.size());
  summary["worst_residual"] = worst_residual();
  summary["all_pass"] = all_pass();
  j["summary"] = summary;
  j["extra"] = extra;
  if (include_timing) {
    JsonValue timing;
    timing["elapsed_seconds"] = elapsed_seconds;
    j["timing"] = timing;
  }
  return j;
}

void write_report_atomic(const std::string& path, const Report& report) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write report to '" + path + "'");
    out << report.to_json(true).dump(2) << "\n";
  }
  fs::rename(tmp, target);
}

}  // namespace spincal
