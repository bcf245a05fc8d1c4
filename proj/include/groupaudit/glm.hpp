#ifndef GROUPAUDIT_GLM_HPP
#define GROUPAUDIT_GLM_HPP

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace groupaudit {

struct NamedColumn {
    std::string name;
    std::vector<double> values;
};

struct CoefEstimate {
    double coef = 0.0;   // log-odds
    double se = 0.0;
    double z = 0.0;
    double p = 1.0;
    double or_ = 1.0;    // exp(coef)
    double ci_lo = 1.0;  // 95% CI on the odds-ratio scale
    double ci_hi = 1.0;
};

struct GlmFit {
    std::map<std::string, CoefEstimate> terms;  // includes "(Intercept)"
    std::size_t n = 0;
    bool converged = false;
    std::size_t iterations = 0;
    double loglik = 0.0;

    const CoefEstimate& at(const std::string& name) const { return terms.at(name); }
};

// Supp-table style "OR (z, p, [lo, hi])" one-liner.
std::string format_or(const CoefEstimate& e);

void to_json(nlohmann::json& j, const CoefEstimate& e);
void to_json(nlohmann::json& j, const GlmFit& f);

// Two-sided normal p-value for a Wald z statistic.
double wald_p(double z);

inline constexpr double kCi95Multiplier = 1.959964;

// Maximum-likelihood logistic regression via iteratively reweighted least
// squares with step-halving. An intercept column is prepended. Converges
// when the score max-norm falls below 1e-8 or the step below 1e-10;
// throws PerfectSeparation on diverging coefficients and SingularDesign
// (naming the collinear columns) on a rank-deficient design.
GlmFit fit_logistic(const std::vector<double>& y,
                    const std::vector<NamedColumn>& predictors);

double bonferroni_threshold(double alpha, std::size_t comparisons);

}  // namespace groupaudit

#endif
