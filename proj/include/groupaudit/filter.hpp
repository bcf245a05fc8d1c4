#ifndef GROUPAUDIT_FILTER_HPP
#define GROUPAUDIT_FILTER_HPP

#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "groupaudit/types.hpp"

namespace groupaudit {

struct FilterConfig {
    std::size_t min_chars = 10;
    std::size_t min_words = 5;
    std::size_t ngram_order = 5;
    std::size_t quota_per_group = 1000;

    enum class DedupScope { group, global };
    DedupScope dedup_scope = DedupScope::group;
};

struct FilterStats {
    std::size_t seen = 0;
    std::size_t kept = 0;
    std::size_t dropped_short = 0;
    std::size_t dropped_overlap = 0;

    double kept_ratio() const {
        return seen > 0 ? static_cast<double>(kept) / static_cast<double>(seen) : 0.0;
    }
};

void to_json(nlohmann::json& j, const FilterStats& s);

bool passes_min_quality(const SentenceRecord& record, const FilterConfig& cfg);

// Greedy online n-gram deduplication: a record is admitted iff none of its
// word-level n-grams was produced by a previously admitted record. Records
// with fewer than n tokens have no n-grams and always pass.
class NgramDeduper {
public:
    explicit NgramDeduper(std::size_t order) : order_(order) {}

    bool admit(const std::string& sentence);

private:
    std::size_t order_;
    std::unordered_set<std::string> seen_;
};

// Length/word minimums followed by per-scope dedup, in stream order.
std::vector<SentenceRecord> apply_filters(const std::vector<SentenceRecord>& records,
                                          const FilterConfig& cfg, FilterStats& stats);

// The balanced regression input for one model or corpus.
struct AuditDataset {
    std::string unit;
    std::vector<SentenceRecord> ingroup;
    std::vector<SentenceRecord> outgroup;

    std::size_t size() const { return ingroup.size() + outgroup.size(); }
};

// Truncates each group to exactly quota_per_group in first-come order;
// throws InsufficientData when a group falls short.
AuditDataset enforce_quota(const std::vector<SentenceRecord>& records,
                           const FilterConfig& cfg, std::string unit = {});

}  // namespace groupaudit

#endif
