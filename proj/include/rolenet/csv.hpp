#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rolenet::csv {

/// Splits one CSV record. Handles double-quoted fields with "" escapes.
std::vector<std::string> split(std::string_view line);

/// Quotes a field only when it contains a comma, quote, or newline.
std::string escape(std::string_view field);

/// Reads the next non-empty line, stripping a trailing '\r'. Returns false at EOF.
bool next_line(std::istream& in, std::string& line, std::size_t& line_number);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

double parse_double(std::string_view text);

}  // namespace rolenet::csv
