#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mastergeo::csv {

/// Shortest-independent fixed formatting: 17 significant digits, "%.17g".
std::string format_double(double v);

void write_header(std::ostream& os, const std::vector<std::string>& columns);
void write_row(std::ostream& os, const std::vector<double>& values);

}  // namespace mastergeo::csv
