#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qlcoll::csv {

/// Decimal form with 17 significant digits; parses back to the same double.
std::string format(double v);

double parse_double(std::string_view field);
long long parse_int(std::string_view field);

std::vector<std::string> split(std::string_view line, char sep = ',');
std::string_view trim(std::string_view s);

/// Writes one row, fields separated by commas.
void write_row(std::ostream& os, const std::vector<std::string>& fields);

/// Reads the header and the data rows of a comma-separated stream.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
Table read_table(std::istream& is);

}  // namespace qlcoll::csv
