#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace thalparc::tsv {

std::vector<std::string_view> split(std::string_view line, char sep = '\t');

/// Strict decimal parse of the whole token; nullopt-like failure via bool.
bool parse_double(std::string_view token, double& out);
bool parse_int(std::string_view token, long long& out);

/// Shortest text that round-trips to the same double.
std::string format_double(double value);
/// Fixed-point with `digits` decimals.
std::string format_fixed(double value, int digits);

/// Drops a trailing '\r' left by CRLF files.
std::string_view chomp(std::string_view line);

} // namespace thalparc::tsv
