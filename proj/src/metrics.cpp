#include "groupaudit/metrics.hpp"

#include <cmath>
#include <ostream>

#include "groupaudit/errors.hpp"

namespace groupaudit {

std::vector<double> z_scale(const std::vector<double>& values) {
    if (values.size() < 2)
        throw DegenerateColumn("need at least 2 values to standardize");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    if (sd == 0.0) throw DegenerateColumn("column has zero variance");
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back((v - mean) / sd);
    return out;
}

std::vector<double> apply_scale(const std::vector<double>& values, ScaleMode mode) {
    switch (mode) {
        case ScaleMode::zscore:
            return z_scale(values);
        case ScaleMode::center: {
            double mean = 0.0;
            for (double v : values) mean += v;
            mean /= static_cast<double>(values.size());
            std::vector<double> out;
            out.reserve(values.size());
            for (double v : values) out.push_back(v - mean);
            return out;
        }
        case ScaleMode::none:
            return values;
    }
    return values;
}

std::vector<CovariateRow> build_design(const AuditDataset& dataset, Outcome outcome,
                                       ScaleMode scale) {
    std::vector<const SentenceRecord*> records;
    records.reserve(dataset.size());
    for (const auto& r : dataset.ingroup) records.push_back(&r);
    for (const auto& r : dataset.outgroup) records.push_back(&r);

    std::vector<double> tokens;
    tokens.reserve(records.size());
    for (const SentenceRecord* r : records) {
        if (!r->sentiment_label)
            throw IncompleteDataset("record lacks a sentiment label: " + r->text);
        tokens.push_back(static_cast<double>(r->word_count));
    }
    const std::vector<double> scaled = apply_scale(tokens, scale);

    std::vector<CovariateRow> rows;
    rows.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const SentenceRecord& r = *records[i];
        CovariateRow row;
        row.is_ingroup = r.group == Group::Ingroup ? 1 : 0;
        row.ttr = r.ttr;
        row.total_tokens = r.word_count;
        row.total_tokens_scaled = scaled[i];
        // both one-vs-rest columns are populated; `outcome` names the one
        // the downstream regression will use
        const SentimentLabel label = *r.sentiment_label;
        row.is_positive = label == SentimentLabel::Positive ? 1 : 0;
        row.is_negative = label == SentimentLabel::Negative ? 1 : 0;
        (void)outcome;
        row.group_id = dataset.unit;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_design_csv(std::ostream& out, const std::vector<CovariateRow>& rows) {
    out << "is_ingroup,ttr,total_tokens,total_tokens_scaled,is_positive,is_negative,group_id\n";
    char buf[64];
    for (const CovariateRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.10g,%zu,%.10g,%d,%d,", r.is_ingroup,
                      r.ttr, r.total_tokens, r.total_tokens_scaled, r.is_positive,
                      r.is_negative);
        out << buf << r.group_id << '\n';
    }
}

}  // namespace groupaudit
