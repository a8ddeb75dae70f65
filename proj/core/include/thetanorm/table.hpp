#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace thetanorm {

/// A header row plus string cells; the CSV contract of the experiment tools.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
  void add_row(std::vector<std::string> row);
};

/// RFC 4180 style: fields containing a comma, quote or newline are quoted.
std::string format_csv(const Table& t);
/// Inverse of format_csv. Throws std::invalid_argument on ragged rows or
/// unterminated quotes.
Table parse_csv(const std::string& text);

/// Shortest round-trippable decimal form.
std::string format_number(double v);

}  // namespace thetanorm
