#include "chartcynics/text.hpp"

#include <array>
#include <cctype>

namespace chartcynics {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

const std::set<std::string>& stopwords() {
    static const std::set<std::string> words = {
        "a",    "an",   "and",  "are",  "as",   "at",   "be",    "been", "but", "by",
        "for",  "from", "had",  "has",  "have", "he",   "her",   "his",  "i",   "if",
        "in",   "is",   "it",   "its",  "no",   "not",  "of",    "on",   "or",  "she",
        "so",   "such", "than", "that", "the",  "their", "then", "there", "these",
        "they", "this", "those", "to",  "was",  "we",   "were",  "which", "with", "you",
    };
    return words;
}

}  // namespace

std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(lower(c));
    return out;
}

std::string normalize_ws(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (is_space(c)) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(c);
        }
    }
    return out;
}

bool contains_word(std::string_view text, std::string_view phrase) {
    const std::string t = to_lower(text);
    const std::string p = normalize_ws(to_lower(phrase));
    if (p.empty()) return false;

    for (std::size_t start = 0; start < t.size(); ++start) {
        if (start > 0 && is_alnum(t[start - 1])) continue;
        if (lower(t[start]) != p[0]) continue;

        std::size_t ti = start;
        std::size_t pi = 0;
        bool ok = true;
        while (pi < p.size()) {
            if (p[pi] == ' ') {
                if (ti >= t.size() || !is_space(t[ti])) {
                    ok = false;
                    break;
                }
                while (ti < t.size() && is_space(t[ti])) ++ti;
                ++pi;
                continue;
            }
            if (ti >= t.size() || t[ti] != p[pi]) {
                ok = false;
                break;
            }
            ++ti;
            ++pi;
        }
        if (ok && (ti >= t.size() || !is_alnum(t[ti]))) return true;
    }
    return false;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::string current;
    const std::size_t n = text.size();

    auto flush = [&] {
        std::size_t b = 0, e = current.size();
        while (b < e && is_space(current[b])) ++b;
        while (e > b && is_space(current[e - 1])) --e;
        if (e > b) out.push_back(current.substr(b, e - b));
        current.clear();
    };

    for (std::size_t i = 0; i < n; ++i) {
        const char c = text[i];
        bool boundary = false;
        if (c == '!' || c == '?' || c == ';' || c == '\n') {
            boundary = true;
        } else if (c == '.') {
            const bool digit_before = i > 0 && std::isdigit(static_cast<unsigned char>(text[i - 1]));
            const bool digit_after =
                i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i + 1]));
            boundary = !(digit_before && digit_after);
        }
        if (boundary) {
            flush();
        } else {
            current.push_back(c);
        }
    }
    flush();
    return out;
}

std::vector<std::string> content_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string token;
    auto flush = [&] {
        if (!token.empty() && !is_stopword(token)) out.push_back(token);
        token.clear();
    };
    for (char c : text) {
        if (is_alnum(c)) {
            token.push_back(lower(c));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

std::set<std::string> content_token_set(std::string_view text) {
    auto tokens = content_tokens(text);
    return {tokens.begin(), tokens.end()};
}

bool is_stopword(std::string_view lower_token) {
    return stopwords().count(std::string(lower_token)) > 0;
}

}  // namespace chartcynics
