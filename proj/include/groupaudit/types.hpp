#ifndef GROUPAUDIT_TYPES_HPP
#define GROUPAUDIT_TYPES_HPP

#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace groupaudit {

enum class Source { corpus, user_turn, model_turn, generated };
enum class Group { Ingroup, Outgroup };
enum class SentimentLabel { Positive, Neutral, Negative };

std::string to_string(Source s);
std::string to_string(Group g);
std::string to_string(SentimentLabel l);
Source source_from_string(const std::string& s);
Group group_from_string(const std::string& s);
SentimentLabel label_from_string(const std::string& s);

struct RawDocument {
    std::string id;
    std::string text;
    Source source = Source::corpus;
    std::map<std::string, std::string> meta;
};

struct SentenceRecord {
    std::string text;
    Group group = Group::Ingroup;
    Source source = Source::corpus;
    std::string origin_id;
    std::size_t word_count = 0;
    std::size_t char_count = 0;
    double ttr = 1.0;
    std::optional<SentimentLabel> sentiment_label;
    std::optional<double> vader_compound;
};

// Populates counts and TTR from the text.
SentenceRecord make_record(std::string text, Group group, Source source,
                           std::string origin_id);

void to_json(nlohmann::json& j, const RawDocument& d);
void from_json(const nlohmann::json& j, RawDocument& d);
void to_json(nlohmann::json& j, const SentenceRecord& r);
void from_json(const nlohmann::json& j, SentenceRecord& r);

}  // namespace groupaudit

#endif
