#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace chartcynics {

std::string to_lower(std::string_view s);

// Collapses every whitespace run to a single space and trims both ends.
std::string normalize_ws(std::string_view s);

// Case-insensitive phrase search with word boundaries at both ends of the
// match. Whitespace inside `phrase` matches any whitespace run in `text`.
bool contains_word(std::string_view text, std::string_view phrase);

// Splits on '.', '!', '?', ';' and newlines. A '.' flanked by digits is part
// of a number and does not split. Returned sentences are trimmed, empty
// pieces dropped.
std::vector<std::string> split_sentences(std::string_view text);

// Lowercased alphanumeric tokens in order of appearance, stopwords removed.
std::vector<std::string> content_tokens(std::string_view text);

std::set<std::string> content_token_set(std::string_view text);

bool is_stopword(std::string_view lower_token);

}  // namespace chartcynics
