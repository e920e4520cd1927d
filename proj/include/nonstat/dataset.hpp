// Aligned columnar sample data: CSV ingestion, validation, and marginal
// summaries. A Dataset is immutable once built; every column has the
// same number of rows (>= 1), values are finite, and column names are
// unique identifiers.

#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nonstat/errors.hpp"
#include "nonstat/parse.hpp"
#include "nonstat/stats.hpp"

namespace nonstat {

class Dataset {
 public:
  // Column order is preserved as given.
  static Dataset from_columns(
      std::vector<std::pair<std::string, std::vector<double>>> columns) {
    Dataset d;
    if (columns.empty()) throw EmptyInput();
    for (auto& [name, values] : columns) {
      if (!is_identifier(name)) throw InvalidColumnName(name);
      if (d.has_column(name)) throw DuplicateColumn(name);
      d.names_.push_back(std::move(name));
      d.columns_.push_back(std::move(values));
    }
    std::size_t n = d.columns_.front().size();
    if (n == 0) throw EmptyInput();
    for (std::size_t c = 0; c < d.columns_.size(); ++c) {
      if (d.columns_[c].size() != n)
        throw Error("column '" + d.names_[c] + "' has " +
                    std::to_string(d.columns_[c].size()) + " rows, expected " +
                    std::to_string(n));
      for (std::size_t r = 0; r < n; ++r)
        if (!std::isfinite(d.columns_[c][r]))
          throw NonFiniteValue(r + 1, d.names_[c]);
    }
    return d;
  }

  std::size_t n_rows() const { return columns_.front().size(); }
  std::size_t n_cols() const { return columns_.size(); }
  const std::vector<std::string>& column_names() const { return names_; }

  bool has_column(std::string_view name) const {
    for (const auto& n : names_)
      if (n == name) return true;
    return false;
  }

  std::span<const double> column(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return columns_[i];
    throw UnknownColumn(std::string(name));
  }

 private:
  Dataset() = default;

  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_cells(std::string_view line,
                                                 char delimiter) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

}  // namespace detail

// UTF-8 CSV, '.' decimal separator, no quoting (cells may not contain the
// delimiter). With header off, columns are named c1..ck. Line numbers in
// errors are 1-based stream lines.
inline Dataset load_csv(std::istream& in, CsvOptions options = {}) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;

  auto column_name = [&](std::size_t i) {
    return i < names.size() ? names[i] : "c" + std::to_string(i + 1);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = detail::split_cells(line, options.delimiter);

    if (options.header && !saw_header) {
      for (auto cell : cells) {
        std::string name(cell);
        if (!is_identifier(name)) throw InvalidColumnName(name);
        for (const auto& seen : names)
          if (seen == name) throw DuplicateColumn(name);
        names.push_back(std::move(name));
      }
      columns.resize(names.size());
      saw_header = true;
      continue;
    }
    if (columns.empty()) {
      columns.resize(cells.size());
      for (std::size_t i = 0; i < cells.size(); ++i)
        names.push_back("c" + std::to_string(i + 1));
    }
    if (cells.size() != columns.size()) throw RaggedRows(line_no);

    for (std::size_t i = 0; i < cells.size(); ++i) {
      auto cell = cells[i];
      double value = 0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (res.ec == std::errc::result_out_of_range) {
        // Underflow rounds to zero and stays acceptable; overflow does not.
        value = std::strtod(std::string(cell).c_str(), nullptr);
      } else if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        throw NonNumericCell(line_no, column_name(i), std::string(cell));
      }
      if (!std::isfinite(value))
        throw NonFiniteValue(line_no, column_name(i));
      columns[i].push_back(value);
    }
  }

  if (columns.empty() || columns.front().empty()) throw EmptyInput();

  std::vector<std::pair<std::string, std::vector<double>>> pairs;
  pairs.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i)
    pairs.emplace_back(std::move(names[i]), std::move(columns[i]));
  return Dataset::from_columns(std::move(pairs));
}

inline MarginalStats column_stats(const Dataset& d, std::string_view name) {
  return summarize(d.column(name));
}

}  // namespace nonstat
