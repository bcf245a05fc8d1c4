#include "groupaudit/audit.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "groupaudit/errors.hpp"
#include "groupaudit/forest.hpp"

namespace groupaudit {

namespace {

std::vector<SentenceRecord> ingest_unit(const AuditRunConfig& config,
                                        const AuditUnit& unit) {
    std::ifstream in(unit.input);
    if (!in) throw ConfigError("run_audit: cannot open " + unit.input.string());
    std::vector<RawDocument> docs;
    if (config.pipeline == Pipeline::audit_conversations)
        docs = read_conversations_jsonl(in);
    else
        docs = read_documents_jsonl(in);
    ExtractConfig extract;
    return extract_prefixed(docs, extract).records;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

bool AuditRunResult::all_ok() const {
    for (const auto& u : units)
        if (!u.ok) return false;
    return true;
}

void score_records(std::vector<SentenceRecord>& records, Classifier classifier,
                   const SentimentLexicon& lexicon,
                   const std::optional<RemoteClassifierConfig>& remote) {
    if (classifier == Classifier::vader) {
        for (auto& r : records) {
            const auto score = vader_compound(r.text, lexicon);
            r.vader_compound = score.compound;
            r.sentiment_label = classify_threshold(score);
        }
        return;
    }
    if (!remote) throw ConfigError("score_records: remote classifier not configured");
    std::vector<std::string> texts;
    texts.reserve(records.size());
    for (const auto& r : records) texts.push_back(r.text);
    auto labels = classify_remote(texts, *remote);
    for (std::size_t i = 0; i < records.size(); ++i)
        records[i].sentiment_label = labels[i];
}

AuditRunResult run_audit(const AuditRunConfig& config) {
    if (config.units.empty()) throw ConfigError("run_audit: no units");
    std::filesystem::create_directories(config.out_dir);
    const auto lexicon = SentimentLexicon::load(config.data_dir);

    AuditRunResult result;
    std::vector<CovariateRow> pooled_pos, pooled_neg;
    ForestPlotSpec forest{"Group sentiment odds ratios", {}};

    for (const auto& unit : config.units) {
        UnitOutcome outcome;
        outcome.unit = unit.name;
        try {
            auto records = ingest_unit(config, unit);
            records = apply_filters(records, config.filter, outcome.filter_stats);
            auto dataset = enforce_quota(records, config.filter, unit.name);
            score_records(dataset.ingroup, config.classifier, lexicon, config.remote);
            score_records(dataset.outgroup, config.classifier, lexicon, config.remote);

            auto pos_rows = build_design(dataset, Outcome::Positive, config.scale);
            auto neg_rows = build_design(dataset, Outcome::Negative, config.scale);
            outcome.report = make_bias_report(unit.name, pos_rows, neg_rows,
                                              config.significance);
            outcome.ok = true;

            for (auto& row : pos_rows) {
                row.group_id = unit.name;
                pooled_pos.push_back(row);
            }
            for (auto& row : neg_rows) {
                row.group_id = unit.name;
                pooled_neg.push_back(row);
            }

            nlohmann::json j = *outcome.report;
            j["seed"] = config.seed;
            j["filter_stats"] = outcome.filter_stats;
            std::ofstream out(config.out_dir / (unit.name + ".json"));
            out << j.dump(2) << '\n';

            const auto& rep = *outcome.report;
            forest.rows.push_back({unit.name, "solidarity",
                                   rep.ingroup_solidarity.estimate.or_,
                                   rep.ingroup_solidarity.estimate.ci_lo,
                                   rep.ingroup_solidarity.estimate.ci_hi});
            forest.rows.push_back({unit.name, "hostility",
                                   rep.outgroup_hostility.estimate.or_,
                                   rep.outgroup_hostility.estimate.ci_lo,
                                   rep.outgroup_hostility.estimate.ci_hi});
        } catch (const AuditError& e) {
            outcome.error = e.what();
        }
        result.units.push_back(std::move(outcome));
    }

    std::size_t ok_units = 0;
    for (const auto& u : result.units) ok_units += u.ok;
    if (ok_units >= 2) {
        result.pooled_solidarity = pooled_fit(pooled_pos, Outcome::Positive);
        result.pooled_hostility = pooled_fit(pooled_neg, Outcome::Negative);
        nlohmann::json pooled = {{"seed", config.seed},
                                 {"solidarity", *result.pooled_solidarity},
                                 {"hostility", *result.pooled_hostility}};
        std::ofstream out(config.out_dir / "pooled.json");
        out << pooled.dump(2) << '\n';
    }

    {
        std::ofstream csv(config.out_dir / "summary.csv");
        csv << "unit,ok,solidarity_or,solidarity_ci_lo,solidarity_ci_hi,"
               "solidarity_p,hostility_or,hostility_ci_lo,hostility_ci_hi,"
               "hostility_p,error\n";
        char buf[256];
        for (const auto& u : result.units) {
            if (u.ok) {
                const auto& s = u.report->ingroup_solidarity.estimate;
                const auto& h = u.report->outgroup_hostility.estimate;
                std::snprintf(buf, sizeof(buf),
                              ",true,%.6f,%.6f,%.6f,%.6g,%.6f,%.6f,%.6f,%.6g,",
                              s.or_, s.ci_lo, s.ci_hi, s.p, h.or_, h.ci_lo,
                              h.ci_hi, h.p);
                csv << csv_escape(u.unit) << buf << '\n';
            } else {
                csv << csv_escape(u.unit) << ",false,,,,,,,,,"
                    << csv_escape(u.error) << '\n';
            }
        }
    }

    if (!forest.rows.empty())
        emit_forest_plot(forest, config.out_dir / "forest.svg");
    return result;
}

}  // namespace groupaudit
