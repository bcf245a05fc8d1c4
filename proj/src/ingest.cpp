#include "groupaudit/ingest.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "groupaudit/errors.hpp"

namespace groupaudit {

namespace {

bool starts_with(std::string_view s, std::string_view prefix, bool case_sensitive) {
    if (s.size() < prefix.size()) return false;
    if (case_sensitive) return s.substr(0, prefix.size()) == prefix;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) !=
            std::tolower(static_cast<unsigned char>(prefix[i])))
            return false;
    }
    return true;
}

}  // namespace

std::vector<SentenceRecord> extract_prefixed(const RawDocument& doc,
                                             const ExtractConfig& cfg) {
    std::vector<SentenceRecord> out;
    for (const std::string& sentence : text::segment_sentences(doc.text, cfg.segmenter)) {
        for (const PrefixRule& rule : cfg.rules) {
            if (starts_with(sentence, rule.prefix, cfg.case_sensitive)) {
                out.push_back(make_record(sentence, rule.group, doc.source, doc.id));
                break;
            }
        }
    }
    return out;
}

ExtractResult extract_prefixed(const std::vector<RawDocument>& docs,
                               const ExtractConfig& cfg) {
    ExtractResult result;
    for (const RawDocument& doc : docs) {
        if (doc.text.empty()) {
            result.errors.push_back({doc.id, "empty document text"});
            continue;
        }
        auto records = extract_prefixed(doc, cfg);
        result.records.insert(result.records.end(),
                              std::make_move_iterator(records.begin()),
                              std::make_move_iterator(records.end()));
    }
    return result;
}

GroupLexicon GroupLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open group lexicon: " + path.string());
    std::vector<std::string> we, they;
    std::vector<std::string>* target = nullptr;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line == "[ingroup]") { target = &we; continue; }
        if (line == "[outgroup]") { target = &they; continue; }
        if (!target) throw ConfigError("group lexicon entry outside a section: " + line);
        target->push_back(text::to_lower(line));
    }
    return from_words(std::move(we), std::move(they));
}

GroupLexicon GroupLexicon::from_words(std::vector<std::string> we_words,
                                      std::vector<std::string> they_words) {
    GroupLexicon lex;
    for (auto& w : we_words) lex.we_.insert(text::to_lower(w));
    for (auto& w : they_words) lex.they_.insert(text::to_lower(w));
    for (const auto& w : lex.we_) {
        if (lex.they_.count(w))
            throw ConfigError("group lexicon sets overlap on word: " + w);
    }
    return lex;
}

std::optional<Group> match_group_words(std::string_view sentence,
                                       const GroupLexicon& lexicon) {
    for (const std::string& tok : text::normalized_tokens(sentence)) {
        if (lexicon.we_words().count(tok)) return Group::Ingroup;
        if (lexicon.they_words().count(tok)) return Group::Outgroup;
    }
    return std::nullopt;
}

std::vector<RawDocument> read_documents_jsonl(std::istream& in) {
    std::vector<RawDocument> docs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        docs.push_back(nlohmann::json::parse(line).get<RawDocument>());
    }
    return docs;
}

std::vector<RawDocument> read_documents_text(std::istream& in,
                                             const std::string& id_prefix) {
    std::vector<RawDocument> docs;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        RawDocument d;
        d.id = id_prefix + "-" + std::to_string(n++);
        d.text = line;
        d.source = Source::corpus;
        docs.push_back(std::move(d));
    }
    return docs;
}

std::vector<RawDocument> read_conversations_jsonl(std::istream& in) {
    std::vector<RawDocument> docs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        const std::string cid = j.at("conversation_id").get<std::string>();
        std::size_t turn_no = 0;
        for (const auto& turn : j.at("turns")) {
            RawDocument d;
            d.id = cid + "#" + std::to_string(turn_no++);
            d.text = turn.at("text").get<std::string>();
            const std::string role = turn.at("role").get<std::string>();
            if (role == "user") d.source = Source::user_turn;
            else if (role == "assistant") d.source = Source::model_turn;
            else throw ConfigError("unknown conversation role: " + role);
            d.meta["conversation_id"] = cid;
            docs.push_back(std::move(d));
        }
    }
    return docs;
}

void write_records_jsonl(std::ostream& out, const std::vector<SentenceRecord>& records) {
    for (const SentenceRecord& r : records) {
        out << nlohmann::json(r).dump() << '\n';
    }
}

std::vector<SentenceRecord> read_records_jsonl(std::istream& in) {
    std::vector<SentenceRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(nlohmann::json::parse(line).get<SentenceRecord>());
    }
    return records;
}

}  // namespace groupaudit
