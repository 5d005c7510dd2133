#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace biofet {

// Tabular run output: unit-annotated header row, one row per grid point,
// provenance footer. Rows that failed to evaluate are recorded as error
// strings instead of being emitted as data.
struct ResultTable {
  std::vector<std::string> columns;            // e.g. "c_i[1/m^3]", "snr[dB]"
  std::vector<std::vector<std::string>> rows;  // formatted cells
  std::vector<std::string> row_errors;         // per-point failures
  std::vector<std::string> footer;             // "key=value" provenance lines

  void add_row(std::vector<std::string> cells);
  // RFC-4180-style CSV; footer emitted as trailing '#' comment lines.
  void write_csv(std::ostream& out) const;
  bool ok() const { return row_errors.empty(); }
};

std::string format_number(double v);

} // namespace biofet
