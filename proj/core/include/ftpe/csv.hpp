#pragma once

#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace ftpe::csv {

/// Shortest decimal representation that round-trips; "nan"/"inf" for
/// non-finite values. Locale independent.
std::string format(double value);

/// Writes a comma-separated row terminated by a single '\n'.
void write_row(std::ostream& out, std::span<const double> values);
void write_row(std::ostream& out, std::initializer_list<double> values);
void write_header(std::ostream& out, std::initializer_list<std::string_view> names);

}  // namespace ftpe::csv
