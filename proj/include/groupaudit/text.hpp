#ifndef GROUPAUDIT_TEXT_HPP
#define GROUPAUDIT_TEXT_HPP

#include <string>
#include <string_view>
#include <vector>

namespace groupaudit::text {

std::string to_lower(std::string_view s);

// Splits on ASCII whitespace, strips leading/trailing punctuation from each
// token and drops tokens that become empty. This is the one tokenizer used
// for word counts, TTR and n-gram deduplication.
std::vector<std::string> word_tokens(std::string_view s);

// word_tokens, lowercased (the normalization used for uniqueness counting).
std::vector<std::string> normalized_tokens(std::string_view s);

std::size_t word_count(std::string_view s);

// Number of Unicode code points (UTF-8 aware; invalid bytes count as one).
std::size_t char_count(std::string_view s);

// Unique normalized tokens / total tokens. Requires at least one token.
double type_token_ratio(std::string_view s);

struct SegmenterOptions {
    // Sentence-final tokens that do not end a sentence.
    std::vector<std::string> abbreviations = {
        "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "St.", "Jr.", "Sr.",
        "vs.", "etc.", "e.g.", "i.e.", "No.", "U.S.", "U.K.",
    };
};

// Rule-based splitter: a run of {. ! ?} ends a sentence when followed by
// whitespace and an upper-case letter, digit or opening quote, unless the
// token containing it is a known abbreviation. Whitespace is trimmed;
// empty input yields an empty list.
std::vector<std::string> segment_sentences(std::string_view doc,
                                           const SegmenterOptions& opts = {});

}  // namespace groupaudit::text

#endif
