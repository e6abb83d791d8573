#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dampwave/errors.hpp"

namespace dampwave::io {

enum class TableFormat { Csv, Json };

/// Round-trip decimal representation (%.17g); non-finite values as nan/inf.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using Cell = std::variant<double, long long, std::string>;

/// Column-named table rendered as CSV (header + rows) or a JSON array of
/// objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw SizeError("table row width does not match header");
    rows.push_back(std::move(row));
  }

  std::string csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out += ',';
        if (const auto* d = std::get_if<double>(&r[i])) out += format_double(*d);
        else if (const auto* n = std::get_if<long long>(&r[i])) out += std::to_string(*n);
        else out += std::get<std::string>(r[i]);
      }
      out += '\n';
    }
    return out;
  }

  nlohmann::json json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json obj = nlohmann::json::object();
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (const auto* d = std::get_if<double>(&r[i])) obj[columns[i]] = std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json(nullptr);
        else if (const auto* n = std::get_if<long long>(&r[i])) obj[columns[i]] = *n;
        else obj[columns[i]] = std::get<std::string>(r[i]);
      }
      arr.push_back(std::move(obj));
    }
    return arr;
  }

  std::string render(TableFormat f) const { return f == TableFormat::Csv ? csv() : json().dump(2) + "\n"; }
};

inline const char* extension(TableFormat f) { return f == TableFormat::Csv ? ".csv" : ".json"; }

/// JSON number or null for non-finite values.
inline nlohmann::json num(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace dampwave::io
