#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace thalparc {

/// Parses `key=value` lines. Blank lines and text after '#' are skipped;
/// whitespace around keys and values is trimmed. Later keys repeat earlier
/// ones in the returned order.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text);

std::uint64_t parse_size(std::string_view key, std::string_view value);
double parse_real(std::string_view key, std::string_view value);
bool parse_bool(std::string_view key, std::string_view value);
std::string format_real(double value);

} // namespace thalparc
