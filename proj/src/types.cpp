#include "groupaudit/types.hpp"

#include "groupaudit/errors.hpp"
#include "groupaudit/text.hpp"

namespace groupaudit {

std::string to_string(Source s) {
    switch (s) {
        case Source::corpus: return "corpus";
        case Source::user_turn: return "user_turn";
        case Source::model_turn: return "model_turn";
        case Source::generated: return "generated";
    }
    return "corpus";
}

std::string to_string(Group g) {
    return g == Group::Ingroup ? "Ingroup" : "Outgroup";
}

std::string to_string(SentimentLabel l) {
    switch (l) {
        case SentimentLabel::Positive: return "Positive";
        case SentimentLabel::Neutral: return "Neutral";
        case SentimentLabel::Negative: return "Negative";
    }
    return "Neutral";
}

Source source_from_string(const std::string& s) {
    if (s == "corpus") return Source::corpus;
    if (s == "user_turn") return Source::user_turn;
    if (s == "model_turn") return Source::model_turn;
    if (s == "generated") return Source::generated;
    throw ConfigError("unknown source: " + s);
}

Group group_from_string(const std::string& s) {
    if (s == "Ingroup") return Group::Ingroup;
    if (s == "Outgroup") return Group::Outgroup;
    throw ConfigError("unknown group: " + s);
}

SentimentLabel label_from_string(const std::string& s) {
    if (s == "Positive") return SentimentLabel::Positive;
    if (s == "Neutral") return SentimentLabel::Neutral;
    if (s == "Negative") return SentimentLabel::Negative;
    throw ConfigError("unknown sentiment label: " + s);
}

SentenceRecord make_record(std::string text_, Group group, Source source,
                           std::string origin_id) {
    SentenceRecord r;
    r.word_count = text::word_count(text_);
    r.char_count = text::char_count(text_);
    r.ttr = r.word_count > 0 ? text::type_token_ratio(text_) : 1.0;
    r.text = std::move(text_);
    r.group = group;
    r.source = source;
    r.origin_id = std::move(origin_id);
    return r;
}

void to_json(nlohmann::json& j, const RawDocument& d) {
    j = nlohmann::json{{"id", d.id},
                       {"text", d.text},
                       {"source", to_string(d.source)},
                       {"meta", d.meta}};
}

void from_json(const nlohmann::json& j, RawDocument& d) {
    d.id = j.at("id").get<std::string>();
    d.text = j.at("text").get<std::string>();
    d.source = source_from_string(j.value("source", "corpus"));
    if (j.contains("meta")) d.meta = j.at("meta").get<std::map<std::string, std::string>>();
}

void to_json(nlohmann::json& j, const SentenceRecord& r) {
    j = nlohmann::json{{"text", r.text},
                       {"group", to_string(r.group)},
                       {"source", to_string(r.source)},
                       {"origin_id", r.origin_id},
                       {"word_count", r.word_count},
                       {"char_count", r.char_count},
                       {"ttr", r.ttr}};
    if (r.sentiment_label) j["sentiment_label"] = to_string(*r.sentiment_label);
    if (r.vader_compound) j["vader_compound"] = *r.vader_compound;
}

void from_json(const nlohmann::json& j, SentenceRecord& r) {
    r.text = j.at("text").get<std::string>();
    r.group = group_from_string(j.at("group").get<std::string>());
    r.source = source_from_string(j.value("source", "corpus"));
    r.origin_id = j.value("origin_id", "");
    r.word_count = j.at("word_count").get<std::size_t>();
    r.char_count = j.at("char_count").get<std::size_t>();
    r.ttr = j.at("ttr").get<double>();
    if (j.contains("sentiment_label") && !j.at("sentiment_label").is_null())
        r.sentiment_label = label_from_string(j.at("sentiment_label").get<std::string>());
    if (j.contains("vader_compound") && !j.at("vader_compound").is_null())
        r.vader_compound = j.at("vader_compound").get<double>();
}

}  // namespace groupaudit
