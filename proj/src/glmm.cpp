#include "groupaudit/glmm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "groupaudit/errors.hpp"

namespace groupaudit {

namespace {

constexpr double kThetaMax = 5.0;     // search bound for random-intercept sd
constexpr double kThetaTol = 1e-5;
constexpr double kBoundaryTheta = 1e-4;
constexpr std::size_t kPirlsMaxIter = 200;

struct Problem {
    Eigen::MatrixXd X;                       // n x p, intercept first
    Eigen::VectorXd y;
    Eigen::MatrixXd Z;                       // n x q, 0/1 indicators, all factors
    std::vector<std::size_t> factor_offset;  // offset of each factor's block in Z
    std::vector<std::size_t> factor_size;
};

double bernoulli_loglik(const Eigen::VectorXd& y, const Eigen::VectorXd& eta) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double e = eta[i];
        ll += y[i] * e - (e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e)));
    }
    return ll;
}

// Joint Newton iterations on the penalized log-likelihood for (beta, u)
// given per-factor random-intercept sds. Returns the Laplace deviance.
struct PirlsResult {
    Eigen::VectorXd beta;
    Eigen::VectorXd u;
    double deviance = 0.0;
    Eigen::MatrixXd beta_cov;  // fixed-effect block of the inverse joint Hessian
    bool converged = false;
};

PirlsResult pirls(const Problem& prob, const std::vector<double>& theta,
                  Eigen::VectorXd beta0, Eigen::VectorXd u0) {
    const Eigen::Index n = prob.X.rows();
    const Eigen::Index p = prob.X.cols();
    const Eigen::Index q = prob.Z.cols();

    // per-coefficient penalty 1/theta^2; a (near-)zero theta pins that
    // factor's intercepts at zero
    Eigen::VectorXd penalty(q);
    std::vector<bool> active(static_cast<std::size_t>(q), true);
    for (std::size_t f = 0; f < theta.size(); ++f) {
        const double th = theta[f];
        for (std::size_t k = 0; k < prob.factor_size[f]; ++k) {
            const std::size_t j = prob.factor_offset[f] + k;
            if (th < 1e-8) {
                active[j] = false;
                penalty[static_cast<Eigen::Index>(j)] = 0.0;
            } else {
                penalty[static_cast<Eigen::Index>(j)] = 1.0 / (th * th);
            }
        }
    }

    auto penalized_ll = [&](const Eigen::VectorXd& beta, const Eigen::VectorXd& u) {
        Eigen::VectorXd eta = prob.X * beta + prob.Z * u;
        double pen = 0.0;
        for (Eigen::Index j = 0; j < q; ++j) pen += penalty[j] * u[j] * u[j];
        return bernoulli_loglik(prob.y, eta) - 0.5 * pen;
    };

    Eigen::VectorXd beta = std::move(beta0);
    Eigen::VectorXd u = std::move(u0);
    for (Eigen::Index j = 0; j < q; ++j) {
        if (!active[static_cast<std::size_t>(j)]) u[j] = 0.0;
    }

    const Eigen::Index m = p + q;
    Eigen::MatrixXd H(m, m);
    double pll = penalized_ll(beta, u);
    bool converged = false;

    for (std::size_t iter = 0; iter < kPirlsMaxIter; ++iter) {
        Eigen::VectorXd eta = prob.X * beta + prob.Z * u;
        Eigen::VectorXd mu = (1.0 + (-eta.array()).exp()).inverse().matrix();
        Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
        Eigen::VectorXd resid = prob.y - mu;

        Eigen::VectorXd g(m);
        g.head(p) = prob.X.transpose() * resid;
        g.tail(q) = prob.Z.transpose() * resid - penalty.cwiseProduct(u);

        H.topLeftCorner(p, p) = prob.X.transpose() * w.asDiagonal() * prob.X;
        H.topRightCorner(p, q) = prob.X.transpose() * w.asDiagonal() * prob.Z;
        H.bottomLeftCorner(q, p) = H.topRightCorner(p, q).transpose();
        H.bottomRightCorner(q, q) = prob.Z.transpose() * w.asDiagonal() * prob.Z;
        H.bottomRightCorner(q, q).diagonal() += penalty;

        // frozen coordinates get an identity row/column
        for (Eigen::Index j = 0; j < q; ++j) {
            if (!active[static_cast<std::size_t>(j)]) {
                H.row(p + j).setZero();
                H.col(p + j).setZero();
                H(p + j, p + j) = 1.0;
                g[p + j] = 0.0;
            }
        }

        if (g.lpNorm<Eigen::Infinity>() <= 1e-9) {
            converged = true;
            break;
        }
        Eigen::VectorXd step = H.ldlt().solve(g);
        double scale = 1.0;
        Eigen::VectorXd beta_new, u_new;
        double pll_new;
        for (int h = 0; h < 30; ++h) {
            beta_new = beta + scale * step.head(p);
            u_new = u + scale * step.tail(q);
            pll_new = penalized_ll(beta_new, u_new);
            if (pll_new >= pll - 1e-12) break;
            scale *= 0.5;
        }
        const double delta = scale * step.lpNorm<Eigen::Infinity>();
        beta = std::move(beta_new);
        u = std::move(u_new);
        pll = pll_new;
        if (delta < 1e-11) {
            converged = true;
            break;
        }
    }

    // final Hessian at the mode
    {
        Eigen::VectorXd eta = prob.X * beta + prob.Z * u;
        Eigen::VectorXd mu = (1.0 + (-eta.array()).exp()).inverse().matrix();
        Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
        H.topLeftCorner(p, p) = prob.X.transpose() * w.asDiagonal() * prob.X;
        H.topRightCorner(p, q) = prob.X.transpose() * w.asDiagonal() * prob.Z;
        H.bottomLeftCorner(q, p) = H.topRightCorner(p, q).transpose();
        H.bottomRightCorner(q, q) = prob.Z.transpose() * w.asDiagonal() * prob.Z;

        // Laplace log-determinant over the active random coordinates:
        // log det(I + theta^2 * [Zt W Z]_uu + cross-factor terms), computed as
        // log det(Hu + D) - log det(D) with D = diag(penalty).
        double logdet = 0.0;
        std::vector<Eigen::Index> act;
        for (Eigen::Index j = 0; j < q; ++j) {
            if (active[static_cast<std::size_t>(j)]) act.push_back(j);
        }
        if (!act.empty()) {
            const auto qa = static_cast<Eigen::Index>(act.size());
            Eigen::MatrixXd Hu(qa, qa);
            for (Eigen::Index a = 0; a < qa; ++a) {
                for (Eigen::Index b = 0; b < qa; ++b)
                    Hu(a, b) = H(p + act[static_cast<std::size_t>(a)],
                                 p + act[static_cast<std::size_t>(b)]);
                Hu(a, a) += penalty[act[static_cast<std::size_t>(a)]];
            }
            Eigen::LLT<Eigen::MatrixXd> llt(Hu);
            if (llt.info() != Eigen::Success)
                throw NonConverged("pirls: random-effect Hessian not positive definite");
            for (Eigen::Index a = 0; a < qa; ++a) {
                logdet += 2.0 * std::log(llt.matrixL()(a, a));
                logdet -= std::log(penalty[act[static_cast<std::size_t>(a)]]);
            }
        }

        double pen = 0.0;
        for (Eigen::Index j = 0; j < q; ++j) pen += penalty[j] * u[j] * u[j];

        PirlsResult res;
        res.deviance = -2.0 * bernoulli_loglik(prob.y, eta) + pen + logdet;
        res.converged = converged;

        // fixed-effect covariance: Schur complement of the joint Hessian
        H.bottomRightCorner(q, q).diagonal() += penalty;
        for (Eigen::Index j = 0; j < q; ++j) {
            if (!active[static_cast<std::size_t>(j)]) {
                H.row(p + j).setZero();
                H.col(p + j).setZero();
                H(p + j, p + j) = 1.0;
            }
        }
        Eigen::MatrixXd Hinv = H.ldlt().solve(Eigen::MatrixXd::Identity(p + q, p + q));
        res.beta_cov = Hinv.topLeftCorner(p, p);
        res.beta = std::move(beta);
        res.u = std::move(u);
        return res;
    }
}

// Golden-section minimization of the profiled deviance on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2.0;
}

}  // namespace

double icc_from_tau(double tau00) {
    return tau00 / (tau00 + kLogisticResidualVariance);
}

void to_json(nlohmann::json& j, const MixedFit& f) {
    j = nlohmann::json{{"fixed", f.fixed},
                       {"tau00", f.tau00},
                       {"icc", f.icc},
                       {"sigma2_residual", f.sigma2_residual},
                       {"n_groups", f.n_groups},
                       {"boundary", f.boundary}};
    if (f.marginal_r2) j["marginal_r2"] = *f.marginal_r2;
    if (f.conditional_r2) j["conditional_r2"] = *f.conditional_r2;
}

MixedFit fit_mixed_logistic(const std::vector<double>& y,
                            const std::vector<NamedColumn>& predictors,
                            const std::vector<GroupingFactor>& factors) {
    if (factors.empty() || factors.size() > 2)
        throw ConfigError("fit_mixed_logistic: need 1 or 2 grouping factors");
    const auto n = static_cast<Eigen::Index>(y.size());

    Problem prob;
    prob.X.resize(n, static_cast<Eigen::Index>(predictors.size() + 1));
    prob.X.col(0).setOnes();
    for (std::size_t c = 0; c < predictors.size(); ++c) {
        if (predictors[c].values.size() != y.size())
            throw ConfigError("fit_mixed_logistic: column length mismatch");
        prob.X.col(static_cast<Eigen::Index>(c + 1)) =
            Eigen::Map<const Eigen::VectorXd>(predictors[c].values.data(), n);
    }
    prob.y = Eigen::Map<const Eigen::VectorXd>(y.data(), n);

    // build 0/1 indicator blocks, levels in first-appearance order
    std::vector<std::vector<std::string>> level_names(factors.size());
    std::vector<std::vector<Eigen::Index>> row_level(factors.size());
    std::size_t q_total = 0;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        if (factors[f].level_per_row.size() != y.size())
            throw ConfigError("fit_mixed_logistic: grouping factor length mismatch");
        std::map<std::string, Eigen::Index> index;
        row_level[f].reserve(y.size());
        for (const std::string& lvl : factors[f].level_per_row) {
            auto [it, inserted] =
                index.emplace(lvl, static_cast<Eigen::Index>(level_names[f].size()));
            if (inserted) level_names[f].push_back(lvl);
            row_level[f].push_back(it->second);
        }
        if (level_names[f].size() < 2)
            throw ConfigError("fit_mixed_logistic: factor " + factors[f].name +
                              " needs at least 2 groups");
        prob.factor_offset.push_back(q_total);
        prob.factor_size.push_back(level_names[f].size());
        q_total += level_names[f].size();
    }
    prob.Z = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(q_total));
    for (std::size_t f = 0; f < factors.size(); ++f) {
        for (Eigen::Index i = 0; i < n; ++i) {
            prob.Z(i, static_cast<Eigen::Index>(prob.factor_offset[f]) +
                          row_level[f][static_cast<std::size_t>(i)]) = 1.0;
        }
    }

    const auto p = prob.X.cols();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(q_total));

    std::vector<double> theta(factors.size(), 0.5);
    auto profiled = [&](const std::vector<double>& th) {
        PirlsResult r = pirls(prob, th, beta, u);
        return r.deviance;
    };

    // coordinate-wise 1-D search; a second sweep refines two-factor fits
    const std::size_t sweeps = factors.size() == 1 ? 1 : 3;
    for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
        for (std::size_t f = 0; f < factors.size(); ++f) {
            std::vector<double> th = theta;
            auto dev1d = [&](double t) {
                th[f] = t;
                return profiled(th);
            };
            theta[f] = golden_min(dev1d, 0.0, kThetaMax, kThetaTol);
            // warm-start subsequent sweeps from the current mode
            PirlsResult r = pirls(prob, theta, beta, u);
            beta = r.beta;
            u = r.u;
        }
    }

    PirlsResult final_fit = pirls(prob, theta, beta, u);
    if (!final_fit.converged)
        throw NonConverged("fit_mixed_logistic: penalized IRLS did not converge");

    MixedFit fit;
    fit.fixed.n = static_cast<std::size_t>(n);
    fit.fixed.converged = true;
    fit.fixed.loglik = -0.5 * final_fit.deviance;
    double tau_sum = 0.0;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        double th = theta[f];
        if (th < kBoundaryTheta) {
            th = 0.0;
            fit.boundary = true;
        }
        fit.tau00[factors[f].name] = th * th;
        tau_sum += th * th;
        fit.n_groups += prob.factor_size[f];
    }
    fit.icc = tau_sum / (tau_sum + kLogisticResidualVariance);

    for (Eigen::Index j = 0; j < p; ++j) {
        CoefEstimate est;
        est.coef = final_fit.beta[j];
        est.se = std::sqrt(final_fit.beta_cov(j, j));
        est.z = est.coef / est.se;
        est.p = wald_p(est.z);
        est.or_ = std::exp(est.coef);
        est.ci_lo = std::exp(est.coef - kCi95Multiplier * est.se);
        est.ci_hi = std::exp(est.coef + kCi95Multiplier * est.se);
        fit.fixed.terms.emplace(j == 0 ? "(Intercept)" : predictors[j - 1].name, est);
    }

    // Nakagawa variance-partition R2 diagnostics
    Eigen::VectorXd eta_fixed = prob.X * final_fit.beta;
    const double mean_eta = eta_fixed.mean();
    const double var_fixed =
        (eta_fixed.array() - mean_eta).square().sum() / static_cast<double>(n - 1);
    const double denom = var_fixed + tau_sum + kLogisticResidualVariance;
    fit.marginal_r2 = var_fixed / denom;
    fit.conditional_r2 = (var_fixed + tau_sum) / denom;
    return fit;
}

}  // namespace groupaudit
