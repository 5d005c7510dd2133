#include "biofet/result_table.hpp"

#include <cstdio>
#include <stdexcept>

namespace biofet {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void ResultTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size())
    throw std::logic_error("ResultTable: row width != column count");
  rows.push_back(std::move(cells));
}

void ResultTable::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << columns[i] << (i + 1 < columns.size() ? "," : "");
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "");
    out << '\n';
  }
  for (const auto& line : footer) out << "# " << line << '\n';
}

} // namespace biofet
