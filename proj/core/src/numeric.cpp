#include "chartcynics/numeric.hpp"

#include <cctype>
#include <cstdlib>

namespace chartcynics {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_digit_at(std::string_view s, std::size_t i) { return i < s.size() && is_digit(s[i]); }

// Matches digits followed by zero or more ",ddd" thousands groups, advancing
// `i` past the match. A comma group trailed by a fourth digit ("1,2345") is
// not a separator, so matching stops before that comma. Returns false if no
// digit was consumed.
bool match_grouped_int(std::string_view s, std::size_t& i) {
    if (!is_digit_at(s, i)) return false;
    while (is_digit_at(s, i)) ++i;
    while (i < s.size() && s[i] == ',' && is_digit_at(s, i + 1) && is_digit_at(s, i + 2) &&
           is_digit_at(s, i + 3) && !is_digit_at(s, i + 4)) {
        i += 4;
    }
    return true;
}

}  // namespace

std::optional<double> parse_numeric(std::string_view token) {
    std::size_t b = 0, e = token.size();
    while (b < e && std::isspace(static_cast<unsigned char>(token[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(token[e - 1]))) --e;
    const std::string_view s = token.substr(b, e - b);
    if (s.empty()) return std::nullopt;

    std::string cleaned;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') cleaned.push_back(s[i++]);
    if (i < s.size() && s[i] == '$') ++i;

    const std::size_t int_start = i;
    const bool has_int = match_grouped_int(s, i);
    bool has_frac = false;
    if (i < s.size() && s[i] == '.' && is_digit_at(s, i + 1)) {
        ++i;
        while (is_digit_at(s, i)) ++i;
        has_frac = true;
    }
    if (!has_int && !has_frac) return std::nullopt;
    if (i < s.size() && s[i] == '%') ++i;
    if (i != s.size()) return std::nullopt;

    for (std::size_t k = int_start; k < s.size(); ++k) {
        if (s[k] != ',' && s[k] != '%') cleaned.push_back(s[k]);
    }
    char* endp = nullptr;
    const double v = std::strtod(cleaned.c_str(), &endp);
    if (endp == nullptr || *endp != '\0') return std::nullopt;
    return v;
}

std::vector<NumericToken> scan_numbers(std::string_view text) {
    std::vector<NumericToken> out;
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        const char c = text[i];
        const char prev = i > 0 ? text[i - 1] : '\0';

        const std::size_t start = i;
        std::size_t j = i;
        bool starts_token = false;

        if (is_digit(c) && !is_alnum(prev) && prev != '.') {
            starts_token = true;
        } else if ((c == '-' || c == '+') && !is_alnum(prev)) {
            if (is_digit_at(text, i + 1) ||
                (i + 1 < n && text[i + 1] == '$' && is_digit_at(text, i + 2)) ||
                (i + 1 < n && text[i + 1] == '.' && is_digit_at(text, i + 2))) {
                starts_token = true;
                ++j;
            }
        } else if (c == '$' && !is_alnum(prev) &&
                   (is_digit_at(text, i + 1) ||
                    (i + 1 < n && text[i + 1] == '.' && is_digit_at(text, i + 2)))) {
            starts_token = true;
        } else if (c == '.' && is_digit_at(text, i + 1) && !is_alnum(prev) && prev != '.') {
            starts_token = true;
        }

        if (!starts_token) {
            ++i;
            continue;
        }

        if (j < n && text[j] == '$') ++j;
        match_grouped_int(text, j);
        if (j < n && text[j] == '.' && is_digit_at(text, j + 1)) {
            ++j;
            while (is_digit_at(text, j)) ++j;
        }
        if (j < n && text[j] == '%') ++j;

        std::string raw(text.substr(start, j - start));
        if (auto v = parse_numeric(raw)) {
            out.push_back(NumericToken{std::move(raw), *v, start, j});
            i = j;
        } else {
            ++i;
        }
    }
    return out;
}

}  // namespace chartcynics
