#include "groupaudit/ablation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "groupaudit/errors.hpp"
#include "groupaudit/text.hpp"

namespace groupaudit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// stable uniform double in [0,1); position-keyed so pass order is irrelevant
double unit_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t key) {
    std::uint64_t x = splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ull));
    x = splitmix64(x ^ splitmix64(key));
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

bool targeted(const LabeledTrainingSentence& s, Group g, SentimentLabel l) {
    return s.group == g && s.sentiment_label == l;
}

}  // namespace

double AblationStats::realized_ingroup_positive() const {
    return ingroup_positive == 0
               ? 1.0
               : static_cast<double>(ingroup_positive_kept) / ingroup_positive;
}

double AblationStats::realized_outgroup_negative() const {
    return outgroup_negative == 0
               ? 1.0
               : static_cast<double>(outgroup_negative_kept) / outgroup_negative;
}

nlohmann::json AblationStats::to_json() const {
    return {{"total_sentences", total_sentences},
            {"ingroup_positive", ingroup_positive},
            {"outgroup_negative", outgroup_negative},
            {"ingroup_positive_kept", ingroup_positive_kept},
            {"outgroup_negative_kept", outgroup_negative_kept},
            {"other_kept", other_kept},
            {"realized_ingroup_positive", realized_ingroup_positive()},
            {"realized_outgroup_negative", realized_outgroup_negative()}};
}

std::vector<LabeledTrainingSentence> label_training_corpus(
    const std::vector<RawDocument>& docs, const GroupLexicon& group_lexicon,
    const SentimentLexicon& sentiment_lexicon) {
    std::vector<LabeledTrainingSentence> out;
    for (const auto& doc : docs) {
        for (auto& sentence : text::segment_sentences(doc.text)) {
            LabeledTrainingSentence s;
            s.text = std::move(sentence);
            s.doc_id = doc.id;
            s.group = match_group_words(s.text, group_lexicon);
            if (s.group)
                s.sentiment_label =
                    classify_threshold(vader_compound(s.text, sentiment_lexicon));
            out.push_back(std::move(s));
        }
    }
    return out;
}

AblationStats apply_ablation(std::vector<LabeledTrainingSentence>& sentences,
                             const AblationSpec& spec) {
    if (spec.keep_ingroup_positive < 0 || spec.keep_ingroup_positive > 1 ||
        spec.keep_outgroup_negative < 0 || spec.keep_outgroup_negative > 1)
        throw ConfigError("apply_ablation: keep fractions must lie in [0,1]");

    const double keep_fraction[2] = {spec.keep_ingroup_positive,
                                     spec.keep_outgroup_negative};
    auto cell_of = [](const LabeledTrainingSentence& s) {
        if (targeted(s, Group::Ingroup, SentimentLabel::Positive)) return 0;
        if (targeted(s, Group::Outgroup, SentimentLabel::Negative)) return 1;
        return -1;
    };

    if (spec.remove_unit == RemoveUnit::Sentence) {
        // keep an exact-size random subset of each cell so the kept count
        // never exceeds the ceiling of fraction times cell size
        std::vector<std::size_t> members[2];
        for (std::size_t i = 0; i < sentences.size(); ++i) {
            int cell = cell_of(sentences[i]);
            if (cell >= 0) members[cell].push_back(i);
        }
        for (int cell : {0, 1}) {
            auto& idx = members[cell];
            const auto n = idx.size();
            const auto k = static_cast<std::size_t>(
                std::llround(keep_fraction[cell] * static_cast<double>(n)));
            for (std::size_t i = 0; i + 1 < n; ++i) {  // Fisher-Yates
                std::size_t j =
                    i + static_cast<std::size_t>(
                            unit_draw(spec.seed, cell, i) * static_cast<double>(n - i));
                std::swap(idx[i], idx[std::min(j, n - 1)]);
            }
            for (std::size_t i = k; i < n; ++i) sentences[idx[i]].keep = false;
        }
    } else {
        // one draw per (document, cell); a hit removes the whole document
        std::map<std::string, bool> doc_drop;
        for (auto& s : sentences) {
            int cell = cell_of(s);
            if (cell < 0) continue;
            auto it = doc_drop.try_emplace(s.doc_id, false).first;
            if (!it->second &&
                unit_draw(spec.seed, cell, fnv1a(s.doc_id)) >= keep_fraction[cell])
                it->second = true;
        }
        for (auto& s : sentences) {
            auto it = doc_drop.find(s.doc_id);
            s.keep = it == doc_drop.end() || !it->second;
        }
    }

    AblationStats stats;
    stats.total_sentences = sentences.size();
    for (const auto& s : sentences) {
        switch (cell_of(s)) {
            case 0:
                ++stats.ingroup_positive;
                if (s.keep) ++stats.ingroup_positive_kept;
                break;
            case 1:
                ++stats.outgroup_negative;
                if (s.keep) ++stats.outgroup_negative_kept;
                break;
            default:
                if (s.keep) ++stats.other_kept;
        }
    }
    return stats;
}

std::vector<std::string> rejoin_documents(
    const std::vector<LabeledTrainingSentence>& sentences) {
    std::vector<std::string> docs;
    std::string current_id;
    bool have_doc = false;
    for (const auto& s : sentences) {
        if (!s.keep) {
            if (!have_doc || s.doc_id != current_id) {
                current_id = s.doc_id;
                have_doc = true;
                docs.emplace_back();
            }
            continue;
        }
        if (!have_doc || s.doc_id != current_id) {
            current_id = s.doc_id;
            have_doc = true;
            docs.emplace_back(s.text);
        } else {
            if (!docs.back().empty()) docs.back() += ' ';
            docs.back() += s.text;
        }
    }
    std::erase_if(docs, [](const std::string& d) { return d.empty(); });
    return docs;
}

}  // namespace groupaudit
