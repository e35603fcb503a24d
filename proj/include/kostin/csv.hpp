#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>

namespace kostin {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

void write_csv_row(std::ostream& os, std::initializer_list<double> values);

}  // namespace kostin
