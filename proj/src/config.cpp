#include "thalparc/config.hpp"

#include "thalparc/error.hpp"
#include "thalparc/tsv.hpp"

#include <charconv>

namespace thalparc {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

Error bad_value(std::string_view key, std::string_view value, std::string_view what) {
    return Error(ErrorCode::invalid_argument,
                 std::string(key) + ": expected " + std::string(what) + ", got '" + std::string(value) + "'");
}

} // namespace

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos || trim(line.substr(0, eq)).empty()) {
            throw Error(ErrorCode::invalid_argument,
                        "config line " + std::to_string(line_no) + ": expected key=value");
        }
        out.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
    }
    return out;
}

std::uint64_t parse_size(std::string_view key, std::string_view value) {
    std::uint64_t out = 0;
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, out);
    if (value.empty() || res.ec != std::errc{} || res.ptr != end) {
        throw bad_value(key, value, "a non-negative integer");
    }
    return out;
}

double parse_real(std::string_view key, std::string_view value) {
    double out = 0.0;
    if (!tsv::parse_double(value, out)) {
        throw bad_value(key, value, "a number");
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no") {
        return false;
    }
    throw bad_value(key, value, "true or false");
}

std::string format_real(double value) { return tsv::format_double(value); }

} // namespace thalparc
