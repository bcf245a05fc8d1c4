#include "groupaudit/glm.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <algorithm>
#include <cstdio>

#include "groupaudit/errors.hpp"

namespace groupaudit {

namespace {

constexpr double kScoreTol = 1e-8;
constexpr double kStepTol = 1e-10;
constexpr std::size_t kMaxIter = 100;
constexpr double kSeparationBound = 30.0;  // |log-odds| beyond this means separation

double bernoulli_loglik(const Eigen::VectorXd& y, const Eigen::VectorXd& eta) {
    // log f = y*eta - log(1 + exp(eta)), with the stable log1p form
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double e = eta[i];
        ll += y[i] * e - (e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e)));
    }
    return ll;
}

}  // namespace

double wald_p(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

double bonferroni_threshold(double alpha, std::size_t comparisons) {
    if (comparisons < 1) throw ConfigError("bonferroni: need at least one comparison");
    return alpha / static_cast<double>(comparisons);
}

std::string format_or(const CoefEstimate& e) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.2f (%.2f, p = %.2f, [%.2f, %.2f])", e.or_,
                  e.z, e.p, e.ci_lo, e.ci_hi);
    return buf;
}

void to_json(nlohmann::json& j, const CoefEstimate& e) {
    j = nlohmann::json{{"coef", e.coef},   {"se", e.se},       {"z", e.z},
                       {"p", e.p},         {"OR", e.or_},
                       {"ci95", nlohmann::json::array({e.ci_lo, e.ci_hi})}};
}

void to_json(nlohmann::json& j, const GlmFit& f) {
    j = nlohmann::json{{"n", f.n},
                       {"converged", f.converged},
                       {"iterations", f.iterations},
                       {"loglik", f.loglik},
                       {"terms", nlohmann::json::object()}};
    for (const auto& [name, est] : f.terms) j["terms"][name] = est;
}

GlmFit fit_logistic(const std::vector<double>& y,
                    const std::vector<NamedColumn>& predictors) {
    const auto n = static_cast<Eigen::Index>(y.size());
    const auto p = static_cast<Eigen::Index>(predictors.size() + 1);
    if (n <= p) throw ConfigError("fit_logistic: need n > number of predictors");
    for (double v : y) {
        if (v != 0.0 && v != 1.0)
            throw ConfigError("fit_logistic: outcome must be binary 0/1");
    }
    {
        std::vector<std::string> names{"(Intercept)"};
        for (const auto& c : predictors) names.push_back(c.name);
        std::sort(names.begin(), names.end());
        if (std::adjacent_find(names.begin(), names.end()) != names.end())
            throw ConfigError("fit_logistic: duplicate predictor names");
    }

    Eigen::MatrixXd X(n, p);
    X.col(0).setOnes();
    for (std::size_t c = 0; c < predictors.size(); ++c) {
        if (static_cast<Eigen::Index>(predictors[c].values.size()) != n)
            throw ConfigError("fit_logistic: column length mismatch: " + predictors[c].name);
        X.col(static_cast<Eigen::Index>(c + 1)) =
            Eigen::Map<const Eigen::VectorXd>(predictors[c].values.data(), n);
    }
    Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), n);

    // rank check up front so collinear columns get a proper diagnostic
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) {
        std::vector<std::string> dependent;
        const auto perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < p; ++k) {
            const Eigen::Index col = perm[k];
            dependent.push_back(col == 0 ? "(Intercept)" : predictors[col - 1].name);
        }
        std::string msg = "fit_logistic: singular design, collinear columns:";
        for (const auto& c : dependent) msg += " " + c;
        throw SingularDesign(msg, dependent);
    }

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd eta = X * beta;
    double ll = bernoulli_loglik(yv, eta);

    GlmFit fit;
    fit.n = static_cast<std::size_t>(n);
    Eigen::MatrixXd info(p, p);

    for (std::size_t iter = 1; iter <= kMaxIter; ++iter) {
        fit.iterations = iter;
        Eigen::VectorXd mu = (1.0 + (-eta.array()).exp()).inverse().matrix();
        Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
        Eigen::VectorXd score = X.transpose() * (yv - mu);
        info = X.transpose() * w.asDiagonal() * X;

        if (score.lpNorm<Eigen::Infinity>() <= kScoreTol) {
            fit.converged = true;
            break;
        }

        Eigen::VectorXd step = info.ldlt().solve(score);
        // step-halving keeps the log-likelihood non-decreasing
        double scale = 1.0;
        Eigen::VectorXd beta_new;
        double ll_new;
        for (int h = 0; h < 30; ++h) {
            beta_new = beta + scale * step;
            ll_new = bernoulli_loglik(yv, X * beta_new);
            if (ll_new >= ll - 1e-12) break;
            scale *= 0.5;
        }
        const double delta = (beta_new - beta).lpNorm<Eigen::Infinity>();
        beta = beta_new;
        eta = X * beta;
        ll = ll_new;

        if (beta.lpNorm<Eigen::Infinity>() > kSeparationBound)
            throw PerfectSeparation(
                "fit_logistic: coefficients diverging; outcome is perfectly separated");

        if (delta < kStepTol) {
            fit.converged = true;
            // refresh the information matrix at the final coefficients
            mu = (1.0 + (-eta.array()).exp()).inverse().matrix();
            w = mu.array() * (1.0 - mu.array());
            info = X.transpose() * w.asDiagonal() * X;
            break;
        }
    }

    fit.loglik = ll;
    Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    for (Eigen::Index j = 0; j < p; ++j) {
        CoefEstimate est;
        est.coef = beta[j];
        est.se = std::sqrt(cov(j, j));
        est.z = est.coef / est.se;
        est.p = wald_p(est.z);
        est.or_ = std::exp(est.coef);
        est.ci_lo = std::exp(est.coef - kCi95Multiplier * est.se);
        est.ci_hi = std::exp(est.coef + kCi95Multiplier * est.se);
        const std::string name = j == 0 ? "(Intercept)" : predictors[j - 1].name;
        fit.terms.emplace(name, est);
    }
    return fit;
}

}  // namespace groupaudit
