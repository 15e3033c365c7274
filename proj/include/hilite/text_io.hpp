#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hilite {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

std::string_view trim(std::string_view s);
std::vector<std::string> split_csv_line(std::string_view line);

// Splits on '\n', dropping a trailing '\r' per line. A final empty line is not returned.
std::vector<std::string_view> split_lines(std::string_view text);

double parse_double(std::string_view s, const std::string& source, std::size_t line);
long parse_long(std::string_view s, const std::string& source, std::size_t line);

// Fixed-point formatting with the given number of decimals; "-0.000" is printed as "0.000".
std::string format_fixed(double value, int decimals);

// Shortest text that parses back to the same double.
std::string format_shortest(double value);

} // namespace hilite
