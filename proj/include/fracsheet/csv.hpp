#pragma once

#include <iosfwd>
#include <string>

#include "fracsheet/field.hpp"

namespace fracsheet {

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

/// Writes `x,y,value` rows, row-major by x then y, full-precision
/// coordinates. Padding nodes are written like any other node.
void write_field_csv(const FieldSample& f, std::ostream& out);
void write_field_csv(const FieldSample& f, const std::string& path);

/// Reads a field written by write_field_csv. The grid is inferred from the
/// coordinates (uniform mesh required); padding is not recoverable from the
/// file, so the result has pad = 0 and extent = max coordinate.
FieldSample read_field_csv(std::istream& in);
FieldSample read_field_csv(const std::string& path);

}  // namespace fracsheet
