#pragma once

// Deterministic CSV / JSON-lines output and run manifests.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lo1d/bounds.hpp"
#include "lo1d/errors.hpp"
#include "lo1d/format.hpp"

namespace lo1d {

inline constexpr const char* kToolkitVersion = "0.1.0";

using Value = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

template <class T>
Value to_value(const T& v) {
  if constexpr (std::is_same_v<T, bool> || std::is_same_v<T, std::monostate>) return v;
  else if constexpr (std::is_integral_v<T>) return static_cast<std::int64_t>(v);
  else if constexpr (std::is_floating_point_v<T>) return static_cast<double>(v);
  else if constexpr (std::is_same_v<T, std::optional<double>>) return v ? Value(*v) : Value();
  else return std::string(v);
}

/// One output row: fields in column order.
class Record {
 public:
  Record& set(std::string key, Value v) {
    for (auto& f : fields_)
      if (f.first == key) {
        f.second = std::move(v);
        return *this;
      }
    fields_.emplace_back(std::move(key), std::move(v));
    return *this;
  }
  template <class T>
  Record& set(std::string key, const T& v) {
    return set(std::move(key), to_value(v));
  }

  const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }
  std::vector<std::string> keys() const {
    std::vector<std::string> k;
    for (const auto& f : fields_) k.push_back(f.first);
    return k;
  }
  const Value* find(const std::string& key) const {
    for (const auto& f : fields_)
      if (f.first == key) return &f.second;
    return nullptr;
  }

 private:
  std::vector<std::pair<std::string, Value>> fields_;
};

enum class Format { CSV, JSONL };

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string csv_cell(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
        else if constexpr (std::is_same_v<T, double>) return format_number(x);
        else return csv_escape(x);
      },
      v);
}

}  // namespace detail

/// A double rounded to its 12-significant-digit canonical form. Non-finite
/// values become the strings "nan", "inf", "-inf".
inline nlohmann::json canonical_json(double x) {
  if (!std::isfinite(x)) return format_number(x);
  return std::stod(format_number(x));
}

inline nlohmann::json to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) return canonical_json(x);
        else return x;
      },
      v);
}

/// Object with sorted keys.
inline nlohmann::json to_json(const Record& r) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : r.fields()) j[k] = to_json(v);
  return j;
}

inline std::string to_csv(const std::vector<Record>& records, std::vector<std::string> columns = {}) {
  if (columns.empty() && !records.empty()) columns = records.front().keys();
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + detail::csv_escape(columns[i]);
  if (!columns.empty()) out += "\r\n";
  for (const auto& r : records) {
    if (r.keys() != columns) throw InvalidArgument("CSV records must share the same columns");
    for (std::size_t i = 0; i < r.fields().size(); ++i) out += (i ? "," : "") + detail::csv_cell(r.fields()[i].second);
    out += "\r\n";
  }
  return out;
}

inline std::string to_jsonl(const std::vector<Record>& records) {
  std::string out;
  for (const auto& r : records) out += to_json(r).dump() + "\n";
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  f.close();
  if (!f) throw IoError("failed writing " + path.string());
}

inline void write_reports(const std::vector<Record>& records, Format format, const std::filesystem::path& path,
                          const std::vector<std::string>& columns = {}) {
  write_text(path, format == Format::CSV ? to_csv(records, columns) : to_jsonl(records));
}

/// Parses JSON lines back into objects.
inline std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::vector<nlohmann::json> out;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) {
      try {
        out.push_back(nlohmann::json::parse(line));
      } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
      }
    }
  return out;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Hex digest of the canonical (sorted-key, compact) serialization.
inline std::string config_digest(const nlohmann::json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config.dump())));
  return buf;
}

/// UTC time in ISO 8601; SOURCE_DATE_EPOCH overrides the clock.
inline std::string utc_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(e, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string toolkit_version = kToolkitVersion;
  std::uint64_t seed = 0;
  std::string config_digest;
  std::string timestamp;
  std::vector<std::string> module_list;
  std::vector<std::string> outputs;

  nlohmann::json to_json() const {
    return {{"toolkit_version", toolkit_version}, {"seed", seed},         {"config_digest", config_digest},
            {"timestamp", timestamp},             {"modules", module_list}, {"outputs", outputs}};
  }
  void write(const std::filesystem::path& path) const { write_text(path, to_json().dump(2) + "\n"); }
};

inline RunManifest make_manifest(const nlohmann::json& config, std::uint64_t seed, std::vector<std::string> modules) {
  return {kToolkitVersion, seed, config_digest(config), utc_timestamp(), std::move(modules), {}};
}

inline Record to_record(const BoundReport& r) {
  Record rec;
  rec.set("state_id", r.state_id)
      .set("state", r.state)
      .set("bound_id", r.bound_id)
      .set("potential", r.potential)
      .set("params", r.params)
      .set("lhs", r.lhs)
      .set("rhs", r.rhs)
      .set("slack", r.slack)
      .set("tolerance", r.tolerance)
      .set("status", to_string(r.status))
      .set("proven", r.proven)
      .set("rhs_alternate", r.rhs_alternate)
      .set("note", r.note);
  return rec;
}

inline std::vector<Record> to_records(const std::vector<BoundReport>& reports) {
  std::vector<Record> out;
  out.reserve(reports.size());
  for (const auto& r : reports) out.push_back(to_record(r));
  return out;
}

inline const std::vector<std::string>& bound_report_columns() {
  static const std::vector<std::string> c{"state_id", "state",     "bound_id", "potential",     "params",
                                          "lhs",      "rhs",       "slack",    "tolerance",     "status",
                                          "proven",   "rhs_alternate", "note"};
  return c;
}

}  // namespace lo1d
