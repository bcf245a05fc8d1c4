#include "groupaudit/bias.hpp"

namespace groupaudit {

namespace {

std::vector<NamedColumn> control_columns(const std::vector<CovariateRow>& rows) {
    NamedColumn ttr{"ttr", {}};
    NamedColumn tok{"total_tokens_scaled", {}};
    ttr.values.reserve(rows.size());
    tok.values.reserve(rows.size());
    for (const auto& r : rows) {
        ttr.values.push_back(r.ttr);
        tok.values.push_back(r.total_tokens_scaled);
    }
    return {std::move(ttr), std::move(tok)};
}

std::vector<double> indicator(const std::vector<CovariateRow>& rows, bool ingroup) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows)
        v.push_back(ingroup ? static_cast<double>(r.is_ingroup)
                            : static_cast<double>(1 - r.is_ingroup));
    return v;
}

std::vector<double> outcome_column(const std::vector<CovariateRow>& rows,
                                   Outcome outcome) {
    std::vector<double> y;
    y.reserve(rows.size());
    for (const auto& r : rows)
        y.push_back(outcome == Outcome::Positive ? static_cast<double>(r.is_positive)
                                                 : static_cast<double>(r.is_negative));
    return y;
}

}  // namespace

GlmFit solidarity_fit(const std::vector<CovariateRow>& rows) {
    std::vector<NamedColumn> cols;
    cols.push_back({"ingroup", indicator(rows, true)});
    for (auto& c : control_columns(rows)) cols.push_back(std::move(c));
    return fit_logistic(outcome_column(rows, Outcome::Positive), cols);
}

GlmFit hostility_fit(const std::vector<CovariateRow>& rows) {
    std::vector<NamedColumn> cols;
    cols.push_back({"outgroup", indicator(rows, false)});
    for (auto& c : control_columns(rows)) cols.push_back(std::move(c));
    return fit_logistic(outcome_column(rows, Outcome::Negative), cols);
}

BiasReport make_bias_report(const std::string& unit,
                            const std::vector<CovariateRow>& positive_rows,
                            const std::vector<CovariateRow>& negative_rows,
                            double significance) {
    BiasReport report;
    report.unit = unit;
    report.significant_at = significance;

    const GlmFit sol = solidarity_fit(positive_rows);
    const GlmFit hos = hostility_fit(negative_rows);
    report.ingroup_solidarity.estimate = sol.at("ingroup");
    report.ingroup_solidarity.formatted = format_or(sol.at("ingroup"));
    report.outgroup_hostility.estimate = hos.at("outgroup");
    report.outgroup_hostility.formatted = format_or(hos.at("outgroup"));
    report.solidarity_sig = report.ingroup_solidarity.estimate.p < significance;
    report.hostility_sig = report.outgroup_hostility.estimate.p < significance;
    return report;
}

GlmFit interaction_fit(const std::vector<CovariateRow>& model_rows,
                       const std::vector<CovariateRow>& human_rows, Outcome outcome) {
    std::vector<CovariateRow> all = model_rows;
    all.insert(all.end(), human_rows.begin(), human_rows.end());

    const bool ingroup_indicator = outcome == Outcome::Positive;
    std::vector<double> group = indicator(all, ingroup_indicator);
    std::vector<double> human(all.size(), 0.0);
    for (std::size_t i = model_rows.size(); i < all.size(); ++i) human[i] = 1.0;
    std::vector<double> inter(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) inter[i] = group[i] * human[i];

    std::vector<NamedColumn> cols;
    cols.push_back({ingroup_indicator ? "ingroup" : "outgroup", std::move(group)});
    cols.push_back({"human", std::move(human)});
    cols.push_back({ingroup_indicator ? "ingroup:human" : "outgroup:human",
                    std::move(inter)});
    for (auto& c : control_columns(all)) cols.push_back(std::move(c));
    return fit_logistic(outcome_column(all, outcome), cols);
}

MixedFit pooled_fit(const std::vector<CovariateRow>& rows, Outcome outcome) {
    std::vector<NamedColumn> cols;
    cols.push_back({outcome == Outcome::Positive ? "ingroup" : "outgroup",
                    indicator(rows, outcome == Outcome::Positive)});
    for (auto& c : control_columns(rows)) cols.push_back(std::move(c));

    GroupingFactor unit{"unit", {}};
    unit.level_per_row.reserve(rows.size());
    for (const auto& r : rows) unit.level_per_row.push_back(r.group_id);
    return fit_mixed_logistic(outcome_column(rows, outcome), cols, {unit});
}

void to_json(nlohmann::json& j, const BiasReport& r) {
    j = nlohmann::json{
        {"unit", r.unit},
        {"ingroup_solidarity",
         {{"estimate", r.ingroup_solidarity.estimate},
          {"formatted", r.ingroup_solidarity.formatted}}},
        {"outgroup_hostility",
         {{"estimate", r.outgroup_hostility.estimate},
          {"formatted", r.outgroup_hostility.formatted}}},
        {"significant_at", r.significant_at},
        {"flags",
         {{"solidarity_sig", r.solidarity_sig}, {"hostility_sig", r.hostility_sig}}}};
}

}  // namespace groupaudit
