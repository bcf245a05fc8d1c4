#include "groupaudit/filter.hpp"

#include "groupaudit/errors.hpp"
#include "groupaudit/text.hpp"

namespace groupaudit {

void to_json(nlohmann::json& j, const FilterStats& s) {
    j = nlohmann::json{{"seen", s.seen},
                       {"kept", s.kept},
                       {"dropped_short", s.dropped_short},
                       {"dropped_overlap", s.dropped_overlap},
                       {"kept_ratio", s.kept_ratio()}};
}

bool passes_min_quality(const SentenceRecord& record, const FilterConfig& cfg) {
    return record.char_count >= cfg.min_chars && record.word_count >= cfg.min_words;
}

bool NgramDeduper::admit(const std::string& sentence) {
    std::vector<std::string> toks = text::normalized_tokens(sentence);
    if (toks.size() < order_) return true;
    std::vector<std::string> grams;
    grams.reserve(toks.size() - order_ + 1);
    for (std::size_t i = 0; i + order_ <= toks.size(); ++i) {
        std::string g = toks[i];
        for (std::size_t k = 1; k < order_; ++k) {
            g += '\x1f';
            g += toks[i + k];
        }
        if (seen_.count(g)) return false;
        grams.push_back(std::move(g));
    }
    for (auto& g : grams) seen_.insert(std::move(g));
    return true;
}

std::vector<SentenceRecord> apply_filters(const std::vector<SentenceRecord>& records,
                                          const FilterConfig& cfg, FilterStats& stats) {
    NgramDeduper ingroup_dedup(cfg.ngram_order);
    NgramDeduper outgroup_dedup(cfg.ngram_order);
    NgramDeduper& global_dedup = ingroup_dedup;  // global scope shares one seen-set

    std::vector<SentenceRecord> kept;
    for (const SentenceRecord& r : records) {
        ++stats.seen;
        if (!passes_min_quality(r, cfg)) {
            ++stats.dropped_short;
            continue;
        }
        NgramDeduper& dedup =
            cfg.dedup_scope == FilterConfig::DedupScope::global
                ? global_dedup
                : (r.group == Group::Ingroup ? ingroup_dedup : outgroup_dedup);
        if (!dedup.admit(r.text)) {
            ++stats.dropped_overlap;
            continue;
        }
        ++stats.kept;
        kept.push_back(r);
    }
    return kept;
}

AuditDataset enforce_quota(const std::vector<SentenceRecord>& records,
                           const FilterConfig& cfg, std::string unit) {
    AuditDataset ds;
    ds.unit = std::move(unit);
    for (const SentenceRecord& r : records) {
        auto& bucket = r.group == Group::Ingroup ? ds.ingroup : ds.outgroup;
        if (bucket.size() < cfg.quota_per_group) bucket.push_back(r);
    }
    if (ds.ingroup.size() < cfg.quota_per_group)
        throw InsufficientData("Ingroup", ds.ingroup.size(), cfg.quota_per_group);
    if (ds.outgroup.size() < cfg.quota_per_group)
        throw InsufficientData("Outgroup", ds.outgroup.size(), cfg.quota_per_group);
    return ds;
}

}  // namespace groupaudit
