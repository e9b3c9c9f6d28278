#include "ftpe/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace ftpe::csv {

std::string format(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_row(std::ostream& out, std::span<const double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format(v);
    first = false;
  }
  out << '\n';
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
  write_row(out, std::span<const double>(values.begin(), values.size()));
}

void write_header(std::ostream& out, std::initializer_list<std::string_view> names) {
  bool first = true;
  for (auto n : names) {
    if (!first) out << ',';
    out << n;
    first = false;
  }
  out << '\n';
}

}  // namespace ftpe::csv
