#pragma once

// Small text helpers shared by the serializers and the CLI. Number
// formatting is shortest round-trip, so output is bit-stable.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace negdim {

std::string format_double(double v);

/// Splits on `sep`; no quoting support (none of our formats need it).
std::vector<std::string_view> split(std::string_view line, char sep);

/// Lines without trailing '\r'; a final empty line is dropped.
std::vector<std::string_view> lines(std::string_view text);

double parse_double(std::string_view field);
std::int64_t parse_int(std::string_view field);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace negdim
