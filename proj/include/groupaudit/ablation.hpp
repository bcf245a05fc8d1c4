#ifndef GROUPAUDIT_ABLATION_HPP
#define GROUPAUDIT_ABLATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "groupaudit/ingest.hpp"
#include "groupaudit/types.hpp"
#include "groupaudit/vader.hpp"

namespace groupaudit {

enum class RemoveUnit { Sentence, Document };

// Fractions of each targeted cell to keep when preparing a debiased
// training corpus. 1.0 keeps everything, 0.0 removes the whole cell.
struct AblationSpec {
    double keep_ingroup_positive = 1.0;
    double keep_outgroup_negative = 1.0;
    std::uint64_t seed = 0;
    RemoveUnit remove_unit = RemoveUnit::Sentence;
};

struct LabeledTrainingSentence {
    std::string text;
    std::string doc_id;
    std::optional<Group> group;           // via group-word lexicon match
    std::optional<SentimentLabel> sentiment_label;  // only when group is set
    bool keep = true;
};

struct AblationStats {
    std::size_t total_sentences = 0;
    std::size_t ingroup_positive = 0;
    std::size_t outgroup_negative = 0;
    std::size_t ingroup_positive_kept = 0;
    std::size_t outgroup_negative_kept = 0;
    std::size_t other_kept = 0;

    double realized_ingroup_positive() const;
    double realized_outgroup_negative() const;
    nlohmann::json to_json() const;
};

// Splits each document into sentences, assigns a group when a group word
// matches, and runs the rule-based sentiment scorer on grouped sentences.
std::vector<LabeledTrainingSentence> label_training_corpus(
    const std::vector<RawDocument>& docs, const GroupLexicon& group_lexicon,
    const SentimentLexicon& sentiment_lexicon);

// Marks a seeded uniform fraction of each targeted cell for removal;
// everything else passes through unchanged and in order. Document mode
// draws once per (document, cell) and drops whole documents.
AblationStats apply_ablation(std::vector<LabeledTrainingSentence>& sentences,
                             const AblationSpec& spec);

// One line per document, surviving sentences re-joined with a space.
// Documents with no surviving sentences are omitted.
std::vector<std::string> rejoin_documents(
    const std::vector<LabeledTrainingSentence>& sentences);

}  // namespace groupaudit

#endif
