#pragma once

// Small CSV / number helpers shared by the text parsers. Cells are separated
// by ',', no quoting; surrounding whitespace and '\r' are stripped.

#include <string>
#include <string_view>
#include <vector>

namespace hsadapt::detail {

std::string_view trim(std::string_view s) noexcept;

// Non-empty logical lines (blank lines skipped), each paired with its 1-based
// line number for error messages.
struct Line {
    std::size_t number;
    std::string_view text;
};
std::vector<Line> split_lines(std::string_view text);

std::vector<std::string_view> split_cells(std::string_view line);

// Parses a decimal number occupying the whole cell. Throws NonNumeric for
// anything else; "nan"/"inf" parse and are left to the caller to reject.
double parse_number(std::string_view cell, std::string_view context);

// Shortest representation that round-trips to the same double.
std::string format_number(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

} // namespace hsadapt::detail
