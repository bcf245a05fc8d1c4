#ifndef GROUPAUDIT_METRICS_HPP
#define GROUPAUDIT_METRICS_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "groupaudit/filter.hpp"
#include "groupaudit/types.hpp"

namespace groupaudit {

enum class ScaleMode { zscore, center, none };
enum class Outcome { Positive, Negative };

struct CovariateRow {
    int is_ingroup = 0;
    double ttr = 0.0;
    std::size_t total_tokens = 0;
    double total_tokens_scaled = 0.0;
    int is_positive = 0;
    int is_negative = 0;
    std::string group_id;                 // model / corpus name, optional
    std::map<std::string, int> extra;     // named 0/1 columns (human, fine-tuned)
};

// Standardizes to mean 0, sample (n-1) sd 1; order preserved. Throws
// DegenerateColumn on zero variance, requires at least two values.
std::vector<double> z_scale(const std::vector<double>& values);

std::vector<double> apply_scale(const std::vector<double>& values, ScaleMode mode);

// One row per record, outcome column set one-vs-rest, token scaling
// computed within this dataset. Throws IncompleteDataset when any record
// lacks a sentiment label.
std::vector<CovariateRow> build_design(const AuditDataset& dataset, Outcome outcome,
                                       ScaleMode scale = ScaleMode::zscore);

void write_design_csv(std::ostream& out, const std::vector<CovariateRow>& rows);

}  // namespace groupaudit

#endif
