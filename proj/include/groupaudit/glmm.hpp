#ifndef GROUPAUDIT_GLMM_HPP
#define GROUPAUDIT_GLMM_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "groupaudit/glm.hpp"

namespace groupaudit {

inline constexpr double kLogisticResidualVariance = 3.289868133696453;  // pi^2/3

struct GroupingFactor {
    std::string name;
    std::vector<std::string> level_per_row;
};

struct MixedFit {
    GlmFit fixed;
    std::map<std::string, double> tau00;  // random-intercept variance per factor
    double icc = 0.0;                     // sum(tau00) / (sum(tau00) + pi^2/3)
    double sigma2_residual = kLogisticResidualVariance;
    std::size_t n_groups = 0;             // across all factors
    std::optional<double> marginal_r2;
    std::optional<double> conditional_r2;
    bool boundary = false;                // some tau00 pinned at zero
};

void to_json(nlohmann::json& j, const MixedFit& f);

double icc_from_tau(double tau00);

// Random-intercept logistic GLMM via the Laplace approximation: penalized
// IRLS for the joint (fixed, random) modes given the variance parameters,
// and a 1-D profiled-deviance search per factor (coordinate-wise for two
// independent factors). Reports Wald fixed-effect inference conditional on
// the estimated variances, tau00 per factor and the ICC.
MixedFit fit_mixed_logistic(const std::vector<double>& y,
                            const std::vector<NamedColumn>& predictors,
                            const std::vector<GroupingFactor>& factors);

}  // namespace groupaudit

#endif
