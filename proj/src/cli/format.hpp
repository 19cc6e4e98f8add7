#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "chball/bounds.hpp"

namespace chball::cli {

enum class OutputFormat { Table, Csv, JsonLines };

OutputFormat parse_format(const std::string& name);

inline constexpr int kSignificantDigits = 10;
inline constexpr int kExtendedDigits = 12;
// Appended to the names of columns holding 50-digit values.
inline constexpr const char* kExtendedMarker = "_x50";

std::string format_number(double value);
std::string format_extended(const ExtendedReal& value);

struct Extended {
  ExtendedReal value;
};

using Cell = std::variant<double, std::int64_t, std::string, bool, std::vector<double>, Extended>;

struct Column {
  std::string name;
  bool extended = false;

  std::string label() const { return extended ? name + kExtendedMarker : name; }
};

// Rows of named cells, written as an aligned table, CSV with a header row, or
// one JSON object per line.
class Report {
 public:
  explicit Report(std::vector<Column> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);
  std::size_t size() const noexcept { return rows_.size(); }

  void write(std::ostream& out, OutputFormat format) const;
  // One record per line as "name: value", for single-row reports in table mode.
  void write_vertical(std::ostream& out) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

using FlagList = std::vector<std::pair<std::string, std::string>>;

// A single line: "# chball-cli <command> <timestamp> key=value ..." for table
// and CSV, {"run": {...}} for json-lines.
void write_run_header(std::ostream& out, OutputFormat format, const std::string& command,
                      const FlagList& flags);

}  // namespace chball::cli
