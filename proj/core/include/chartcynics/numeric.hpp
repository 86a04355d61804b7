#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chartcynics {

struct NumericToken {
    std::string raw;        // token as it appeared, e.g. "$1,234.5" or "87%"
    double value = 0.0;
    std::size_t begin = 0;  // byte offset into the scanned text
    std::size_t end = 0;    // one past the last byte
};

// Parses a single token under the locale rules shared by the OCR path and the
// reward scorer: optional "$" prefix, "," thousands separators (groups of 3),
// optional "%" suffix. "1.234" is a plain decimal, never a grouped integer.
// Returns nullopt when the token is not numeric under these rules.
std::optional<double> parse_numeric(std::string_view token);

// Left-to-right scan for numeric tokens in free text. A token never starts
// inside a word ("B12" yields nothing) and a '-' acts as a sign only when it
// does not directly follow a digit, so "2024-03-01" scans as 2024, 3, 1.
std::vector<NumericToken> scan_numbers(std::string_view text);

}  // namespace chartcynics
