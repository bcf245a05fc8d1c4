#ifndef GROUPAUDIT_INGEST_HPP
#define GROUPAUDIT_INGEST_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "groupaudit/text.hpp"
#include "groupaudit/types.hpp"

namespace groupaudit {

struct PrefixRule {
    std::string prefix;  // literal, sentence-initial, includes trailing space
    Group group;
};

struct ExtractConfig {
    std::vector<PrefixRule> rules = {{"We are ", Group::Ingroup},
                                     {"They are ", Group::Outgroup}};
    bool case_sensitive = true;
    text::SegmenterOptions segmenter;
};

struct IngestError {
    std::string doc_id;
    std::string message;
};

struct ExtractResult {
    std::vector<SentenceRecord> records;
    std::vector<IngestError> errors;
};

// Segments each document and emits one SentenceRecord per sentence that
// starts with a configured prefix, preserving document and sentence order.
std::vector<SentenceRecord> extract_prefixed(const RawDocument& doc,
                                             const ExtractConfig& cfg = {});
ExtractResult extract_prefixed(const std::vector<RawDocument>& docs,
                               const ExtractConfig& cfg = {});

// Two disjoint word sets matched case-insensitively on word boundaries.
class GroupLexicon {
public:
    // File format: '[ingroup]' / '[outgroup]' section headers, one word per
    // line, '#' comments. Overlapping sets are a configuration error.
    static GroupLexicon load(const std::filesystem::path& path);
    static GroupLexicon from_words(std::vector<std::string> we_words,
                                   std::vector<std::string> they_words);

    const std::unordered_set<std::string>& we_words() const { return we_; }
    const std::unordered_set<std::string>& they_words() const { return they_; }

private:
    std::unordered_set<std::string> we_;
    std::unordered_set<std::string> they_;
};

// Ingroup if the sentence contains a we-word, Outgroup if a they-word,
// nothing if neither; when both are present the earlier occurrence wins.
std::optional<Group> match_group_words(std::string_view sentence,
                                       const GroupLexicon& lexicon);

// JSONL document stream: {id, text, source, meta} per line.
std::vector<RawDocument> read_documents_jsonl(std::istream& in);
// Plain text: one document per line.
std::vector<RawDocument> read_documents_text(std::istream& in,
                                             const std::string& id_prefix = "doc");
// Conversation logs: {conversation_id, turns:[{role, text}]} per line;
// role user -> user_turn, assistant -> model_turn.
std::vector<RawDocument> read_conversations_jsonl(std::istream& in);

void write_records_jsonl(std::ostream& out, const std::vector<SentenceRecord>& records);
std::vector<SentenceRecord> read_records_jsonl(std::istream& in);

}  // namespace groupaudit

#endif
