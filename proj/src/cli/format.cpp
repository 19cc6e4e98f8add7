#include "format.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "chball/errors.hpp"

namespace chball::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ostringstream classic_stream() {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  return s;
}

std::string render(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          std::string s;
          for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_number(v[i]);
          return s;
        } else {
          return format_extended(v.value);
        }
      },
      cell);
}

ordered_json number_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_number(v));
}

ordered_json to_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return number_json(v);
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          ordered_json a = ordered_json::array();
          for (const double x : v) a.push_back(number_json(x));
          return a;
        } else if constexpr (std::is_same_v<T, Extended>) {
          if (!boost::multiprecision::isfinite(v.value)) return nullptr;
          return std::stod(format_extended(v.value));
        } else {
          return v;
        }
      },
      cell);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (const char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s = classic_stream();
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "table") return OutputFormat::Table;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json-lines") return OutputFormat::JsonLines;
  throw InvalidInput("unknown format " + name);
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::ostringstream s = classic_stream();
  s << std::setprecision(kSignificantDigits) << value;
  return s.str();
}

std::string format_extended(const ExtendedReal& value) {
  if (!boost::multiprecision::isfinite(value)) return value > 0 ? "inf" : "nan";
  std::ostringstream s = classic_stream();
  s << std::scientific << std::setprecision(kExtendedDigits - 1) << value;
  return s.str();
}

void Report::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw InvalidInput("report row has the wrong number of cells");
  rows_.push_back(std::move(row));
}

void Report::write(std::ostream& out, OutputFormat format) const {
  switch (format) {
    case OutputFormat::Csv: {
      for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << csv_field(columns_[c].label());
      out << '\n';
      for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(render(row[c]));
        out << '\n';
      }
      return;
    }
    case OutputFormat::JsonLines: {
      for (const auto& row : rows_) {
        ordered_json obj = ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) obj[columns_[c].label()] = to_json(row[c]);
        out << obj.dump() << '\n';
      }
      return;
    }
    case OutputFormat::Table: {
      std::vector<std::vector<std::string>> text;
      std::vector<std::size_t> width(columns_.size());
      for (std::size_t c = 0; c < columns_.size(); ++c) width[c] = columns_[c].label().size();
      for (const auto& row : rows_) {
        auto& line = text.emplace_back();
        for (std::size_t c = 0; c < row.size(); ++c) {
          line.push_back(render(row[c]));
          width[c] = std::max(width[c], line.back().size());
        }
      }
      auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
          out << (c ? "  " : "");
          if (c + 1 == cells.size()) {
            out << cells[c];
          } else {
            out << std::left << std::setw(static_cast<int>(width[c])) << cells[c];
          }
        }
        out << '\n';
      };
      std::vector<std::string> header;
      for (const auto& col : columns_) header.push_back(col.label());
      emit(header);
      std::vector<std::string> rule;
      for (const std::size_t w : width) rule.emplace_back(w, '-');
      emit(rule);
      for (const auto& line : text) emit(line);
      return;
    }
  }
}

void Report::write_vertical(std::ostream& out) const {
  std::size_t width = 0;
  for (const auto& col : columns_) width = std::max(width, col.label().size());
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << std::left << std::setw(static_cast<int>(width)) << columns_[c].label() << "  " << render(row[c])
          << '\n';
    }
  }
}

void write_run_header(std::ostream& out, OutputFormat format, const std::string& command,
                      const FlagList& flags) {
  const std::string stamp = utc_timestamp();
  if (format == OutputFormat::JsonLines) {
    ordered_json run = ordered_json::object();
    run["command"] = command;
    run["timestamp"] = stamp;
    for (const auto& [key, value] : flags) run[key] = value;
    out << ordered_json{{"run", run}}.dump() << '\n';
    return;
  }
  out << "# chball-cli " << command << ' ' << stamp;
  for (const auto& [key, value] : flags) out << ' ' << key << '=' << value;
  out << '\n';
}

}  // namespace chball::cli
