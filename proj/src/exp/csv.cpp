#include "rcfd/exp/csv.hpp"

#include <cstdio>
#include <sstream>

namespace rcfd::exp {

std::string fmt6(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\r\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return out + "\"";
}

namespace {

void write_row(std::ostream& os, const std::vector<std::string>& row)
{
  for (std::size_t i = 0; i < row.size(); ++i) {
    os << (i == 0 ? "" : ",") << csv_field(row[i]);
  }
  os << "\r\n";
}

} // namespace

void CsvTable::write(std::ostream& os) const
{
  for (const std::string& m : meta) {
    os << "# " << m << "\r\n";
  }
  os << data_text();
}

std::string CsvTable::data_text() const
{
  std::ostringstream os;
  write_row(os, header);
  for (const auto& row : rows) {
    write_row(os, row);
  }
  return os.str();
}

} // namespace rcfd::exp
