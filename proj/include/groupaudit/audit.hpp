#ifndef GROUPAUDIT_AUDIT_HPP
#define GROUPAUDIT_AUDIT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "groupaudit/bias.hpp"
#include "groupaudit/filter.hpp"
#include "groupaudit/ingest.hpp"
#include "groupaudit/metrics.hpp"
#include "groupaudit/remote.hpp"
#include "groupaudit/vader.hpp"

namespace groupaudit {

enum class Pipeline { audit_corpus, audit_conversations };
enum class Classifier { vader, remote };

struct AuditUnit {
    std::string name;
    std::filesystem::path input;  // documents or conversations JSONL
};

struct AuditRunConfig {
    Pipeline pipeline = Pipeline::audit_corpus;
    std::vector<AuditUnit> units;
    Classifier classifier = Classifier::vader;
    FilterConfig filter;
    ScaleMode scale = ScaleMode::zscore;
    std::filesystem::path data_dir;  // sentiment + group lexicon files
    std::filesystem::path out_dir;
    std::uint64_t seed = 0;
    double significance = kDefaultSignificance;
    std::optional<RemoteClassifierConfig> remote;
};

struct UnitOutcome {
    std::string unit;
    bool ok = false;
    std::string error;
    std::optional<BiasReport> report;
    FilterStats filter_stats;
};

struct AuditRunResult {
    std::vector<UnitOutcome> units;
    std::optional<MixedFit> pooled_solidarity;
    std::optional<MixedFit> pooled_hostility;

    bool all_ok() const;
};

// Runs ingest, filter, sentiment, and both regressions for every unit,
// writing <unit>.json, summary.csv, forest.svg, and pooled.json (when at
// least two units succeed) under out_dir. A failing unit is recorded and
// skipped; the rest of the run continues.
AuditRunResult run_audit(const AuditRunConfig& config);

// Fills sentiment_label (and vader_compound for the local scorer) in place.
void score_records(std::vector<SentenceRecord>& records, Classifier classifier,
                   const SentimentLexicon& lexicon,
                   const std::optional<RemoteClassifierConfig>& remote);

}  // namespace groupaudit

#endif
