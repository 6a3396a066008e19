// CSV output: a '#' metadata block, one header row, then data rows.

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rcfd::exp {

/// Six significant digits, the precision of every probability and
/// throughput column.
std::string fmt6(double x);

/// Quotes a field when it holds a comma, quote or line break.
std::string csv_field(const std::string& s);

struct CsvTable {
  /// Lines written after "# ", before the header.
  std::vector<std::string> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os) const;
  /// Header and data rows only, for comparisons that ignore metadata.
  std::string data_text() const;
};

} // namespace rcfd::exp
