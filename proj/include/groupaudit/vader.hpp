#ifndef GROUPAUDIT_VADER_HPP
#define GROUPAUDIT_VADER_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "groupaudit/types.hpp"

namespace groupaudit {

// Rule-based sentiment lexicon plus the constant tables the scoring rules
// consume. All data ships as external files (token TAB valence per line).
struct SentimentLexicon {
    std::unordered_map<std::string, double> entries;
    std::unordered_map<std::string, double> boosters;
    std::unordered_set<std::string> negations;
    std::unordered_map<std::string, double> idioms;

    // Loads vader_lexicon.txt, vader_boosters.txt, vader_negations.txt and
    // vader_idioms.txt from a data directory.
    static SentimentLexicon load(const std::filesystem::path& data_dir);
    static SentimentLexicon load_files(const std::filesystem::path& lexicon,
                                       const std::filesystem::path& boosters,
                                       const std::filesystem::path& negations,
                                       const std::filesystem::path& idioms);
};

struct SentimentScore {
    double compound = 0.0;  // normalized valence in [-1, 1]
    double pos = 0.0;
    double neu = 0.0;
    double neg = 0.0;
};

// Scores one sentence: lexicon valence lookup with degree boosters,
// negation flipping, "never so/this" and "least" special cases, idiom
// overrides, contrastive-conjunction reweighting around "but", all-caps
// and punctuation emphasis, then compound = s / sqrt(s^2 + 15).
SentimentScore vader_compound(std::string_view sentence,
                              const SentimentLexicon& lexicon);

// Positive if compound >= .05, Negative if compound <= -.05, else Neutral.
SentimentLabel classify_threshold(const SentimentScore& score);
SentimentLabel classify_threshold(double compound);

}  // namespace groupaudit

#endif
