#include "groupaudit/text.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace groupaudit::text {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::string_view strip_punct(std::string_view tok) {
    std::size_t b = 0;
    std::size_t e = tok.size();
    while (b < e && is_punct(tok[b])) ++b;
    while (e > b && is_punct(tok[e - 1])) --e;
    return tok.substr(b, e - b);
}

}  // namespace

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string> word_tokens(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t start = i;
        while (i < s.size() && !is_space(s[i])) ++i;
        if (i > start) {
            std::string_view w = strip_punct(s.substr(start, i - start));
            if (!w.empty()) out.emplace_back(w);
        }
    }
    return out;
}

std::vector<std::string> normalized_tokens(std::string_view s) {
    std::vector<std::string> out = word_tokens(s);
    for (auto& w : out) w = to_lower(w);
    return out;
}

std::size_t word_count(std::string_view s) { return word_tokens(s).size(); }

std::size_t char_count(std::string_view s) {
    std::size_t n = 0;
    for (char c : s) {
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;  // not a continuation byte
    }
    return n;
}

double type_token_ratio(std::string_view s) {
    std::vector<std::string> toks = normalized_tokens(s);
    std::unordered_set<std::string_view> uniq(toks.begin(), toks.end());
    return static_cast<double>(uniq.size()) / static_cast<double>(toks.size());
}

std::vector<std::string> segment_sentences(std::string_view doc,
                                           const SegmenterOptions& opts) {
    std::vector<std::string> out;
    auto trim = [](std::string_view v) {
        std::size_t b = 0, e = v.size();
        while (b < e && is_space(v[b])) ++b;
        while (e > b && is_space(v[e - 1])) --e;
        return v.substr(b, e - b);
    };
    auto emit = [&](std::string_view piece) {
        std::string_view t = trim(piece);
        if (!t.empty()) out.emplace_back(t);
    };

    std::size_t start = 0;
    std::size_t i = 0;
    while (i < doc.size()) {
        char c = doc[i];
        if (c == '.' || c == '!' || c == '?') {
            std::size_t end = i + 1;
            while (end < doc.size() &&
                   (doc[end] == '.' || doc[end] == '!' || doc[end] == '?'))
                ++end;
            // closing quotes and brackets stay with the sentence
            while (end < doc.size() &&
                   (doc[end] == '"' || doc[end] == '\'' || doc[end] == ')'))
                ++end;
            // next non-space character decides whether this terminates a sentence
            std::size_t nxt = end;
            while (nxt < doc.size() && is_space(doc[nxt])) ++nxt;
            bool boundary = nxt > end || nxt == doc.size();
            if (boundary && nxt < doc.size()) {
                char n = doc[nxt];
                boundary = is_upper(n) || is_digit(n) || n == '"' || n == '\'';
            }
            if (boundary && c == '.' && end == i + 1) {
                // token ending here may be an abbreviation
                std::size_t tb = i + 1;
                while (tb > start && !is_space(doc[tb - 1])) --tb;
                std::string tok(doc.substr(tb, end - tb));
                if (std::find(opts.abbreviations.begin(), opts.abbreviations.end(),
                              tok) != opts.abbreviations.end())
                    boundary = false;
            }
            if (boundary) {
                emit(doc.substr(start, end - start));
                start = nxt;
                i = nxt;
                continue;
            }
            i = end;
            continue;
        }
        ++i;
    }
    if (start < doc.size()) emit(doc.substr(start));
    return out;
}

}  // namespace groupaudit::text
