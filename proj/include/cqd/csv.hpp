#pragma once

// Minimal CSV writer: header row, '.' decimal point, %.17g floats, LF endings.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace cqd {

using CsvCell = std::variant<double, long long, std::string>;

inline std::string csv_format(const CsvCell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  const auto& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
    std::vector<CsvCell> cells(header.begin(), header.end());
    write(cells);
  }

  template <class... Ts>
  void row(const Ts&... values) {
    write({cell(values)...});
  }

  void row(const std::vector<CsvCell>& cells) { write(cells); }

 private:
  template <class T>
  static CsvCell cell(const T& v) {
    if constexpr (std::is_floating_point_v<T>) return static_cast<double>(v);
    else if constexpr (std::is_integral_v<T>) return static_cast<long long>(v);
    else return std::string(v);
  }

  void write(const std::vector<CsvCell>& cells) {
    if (cells.size() != columns_) throw std::logic_error("csv row width does not match header");
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      line += csv_format(cells[i]);
    }
    line += '\n';
    out_ << line;
  }

  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace cqd
