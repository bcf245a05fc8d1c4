#ifndef GROUPAUDIT_BIAS_HPP
#define GROUPAUDIT_BIAS_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "groupaudit/glm.hpp"
#include "groupaudit/glmm.hpp"
#include "groupaudit/metrics.hpp"

namespace groupaudit {

// Default significance threshold: .05 Bonferroni-corrected for the 112
// per-model comparisons (56 models x 2 measures).
inline constexpr double kDefaultSignificance = 0.05 / 112.0;

struct BiasMeasure {
    CoefEstimate estimate;  // the group indicator's slice of the fit
    std::string formatted;  // "OR (z, p, [lo, hi])"
};

struct BiasReport {
    std::string unit;
    BiasMeasure ingroup_solidarity;
    BiasMeasure outgroup_hostility;
    double significant_at = kDefaultSignificance;
    bool solidarity_sig = false;
    bool hostility_sig = false;
};

void to_json(nlohmann::json& j, const BiasReport& r);

// Positive-sentiment outcome regressed on the ingroup indicator (outgroup
// reference) plus TTR and scaled token count.
GlmFit solidarity_fit(const std::vector<CovariateRow>& rows);
// Negative-sentiment outcome regressed on the outgroup indicator (ingroup
// reference), same controls.
GlmFit hostility_fit(const std::vector<CovariateRow>& rows);

BiasReport make_bias_report(const std::string& unit,
                            const std::vector<CovariateRow>& positive_rows,
                            const std::vector<CovariateRow>& negative_rows,
                            double significance = kDefaultSignificance);

// outcome ~ group + human + group:human + ttr + tokens_scaled over the
// concatenation of model and human rows; the interaction term's p-value
// decides whether the unit differs from the human baseline.
GlmFit interaction_fit(const std::vector<CovariateRow>& model_rows,
                       const std::vector<CovariateRow>& human_rows, Outcome outcome);

// Pooled fit across units with unit name as the random intercept.
MixedFit pooled_fit(const std::vector<CovariateRow>& rows, Outcome outcome);

}  // namespace groupaudit

#endif
