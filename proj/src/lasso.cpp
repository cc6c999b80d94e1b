#include "subweibull/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subweibull {

void LassoProblem::validate() const {
    if (X.rows() != y.size()) throw std::invalid_argument("lasso: X rows must equal length of y");
    if (X.rows() < 1 || X.cols() < 1) throw std::invalid_argument("lasso: empty problem");
    if (!X.allFinite() || !y.allFinite()) throw std::invalid_argument("lasso: non-finite data");
}

double soft_threshold(double z, double lambda) {
    if (z > lambda) return z - lambda;
    if (z < -lambda) return z + lambda;
    return 0.0;
}

double lasso_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                       double lambda) {
    const double n = static_cast<double>(X.rows());
    return (y - X * beta).squaredNorm() / (2.0 * n) + lambda * beta.lpNorm<1>();
}

double kkt_residual(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                    double lambda) {
    const double n = static_cast<double>(X.rows());
    const Eigen::VectorXd g = X.transpose() * (y - X * beta) / n;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
        const double v = beta(j) != 0.0 ? std::fabs(g(j) - lambda * (beta(j) > 0.0 ? 1.0 : -1.0))
                                        : std::max(0.0, std::fabs(g(j)) - lambda);
        worst = std::max(worst, v);
    }
    return worst;
}

LassoFit solve(const LassoProblem& problem, double lambda, double tol, int max_iter) {
    problem.validate();
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lasso: lambda must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("lasso: tol must be positive");
    const auto& X = problem.X;
    const Eigen::Index n = X.rows(), p = X.cols();
    const double nd = static_cast<double>(n);
    const Eigen::VectorXd colsq = X.colwise().squaredNorm().transpose() / nd;

    LassoFit fit;
    fit.lambda = lambda;
    fit.beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd r = problem.y;
    double prev_obj = r.squaredNorm() / (2.0 * nd);

    auto sweep = [&](const std::vector<Eigen::Index>& coords) {
        double max_delta = 0.0;
        for (Eigen::Index j : coords) {
            if (colsq(j) == 0.0) continue;
            const double old = fit.beta(j);
            const double z = X.col(j).dot(r) / nd + colsq(j) * old;
            const double nw = soft_threshold(z, lambda) / colsq(j);
            if (nw != old) {
                r.noalias() -= (nw - old) * X.col(j);
                fit.beta(j) = nw;
                max_delta = std::max(max_delta, std::fabs(nw - old));
            }
        }
        ++fit.iterations;
        const double obj = r.squaredNorm() / (2.0 * nd) + lambda * fit.beta.lpNorm<1>();
        if (obj > prev_obj + 1e-12 * std::max(1.0, std::fabs(prev_obj))) fit.objective_monotone = false;
        prev_obj = obj;
        return max_delta;
    };

    std::vector<Eigen::Index> all(p);
    for (Eigen::Index j = 0; j < p; ++j) all[j] = j;

    while (fit.iterations < max_iter) {
        const double d = sweep(all);
        if (d < tol * (1.0 + fit.beta.lpNorm<Eigen::Infinity>())) {
            fit.kkt_residual = kkt_residual(X, problem.y, fit.beta, lambda);
            if (fit.kkt_residual <= 10.0 * tol) {
                fit.converged = true;
                break;
            }
        }
        std::vector<Eigen::Index> active;
        for (Eigen::Index j = 0; j < p; ++j)
            if (fit.beta(j) != 0.0) active.push_back(j);
        while (!active.empty() && fit.iterations < max_iter) {
            if (sweep(active) < tol * (1.0 + fit.beta.lpNorm<Eigen::Infinity>())) break;
        }
    }
    fit.objective = lasso_objective(X, problem.y, fit.beta, lambda);
    if (!fit.converged) fit.kkt_residual = kkt_residual(X, problem.y, fit.beta, lambda);
    return fit;
}

double lambda_theory_subweibull(double sigma_np, double k_np, double n, double p, double gamma,
                                const BoundConstants& constants) {
    if (!(sigma_np >= 0.0) || !(k_np >= 0.0)) throw std::invalid_argument("lambda: scales must be >= 0");
    if (!(n >= 2.0) || !(p >= 1.0)) throw std::invalid_argument("lambda: need n >= 2, p >= 1");
    if (!(gamma > 0.0)) throw std::invalid_argument("lambda: gamma must be positive");
    constants.validate();
    const double lnp = std::log(n * p);
    const double lam = 14.0 * std::sqrt(2.0) * sigma_np * std::sqrt(lnp / n) +
                       constants.c_gamma_lasso * k_np * k_np * std::pow(std::log(2.0 * n), 1.0 / gamma) *
                           std::pow(2.0 * lnp, 1.0 / gamma) / n;
    if (!(lam > 0.0)) throw std::invalid_argument("lambda: degenerate policy gives lambda = 0");
    return lam;
}

double lambda_theory_poly(double sigma_np, double k_np, double k_eps_r, double n, double p, double alpha, double r,
                          double L, const BoundConstants& constants) {
    if (!(sigma_np >= 0.0) || !(k_np >= 0.0) || !(k_eps_r >= 0.0))
        throw std::invalid_argument("lambda: scales must be >= 0");
    if (!(n >= 2.0) || !(p >= 1.0)) throw std::invalid_argument("lambda: need n >= 2, p >= 1");
    if (!(r >= 2.0)) throw std::invalid_argument("lambda: r must be >= 2");
    if (!(L >= 1.0)) throw std::invalid_argument("lambda: L must be >= 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("lambda: alpha must be positive");
    constants.validate();
    const double lnp = std::log(n * p);
    const double lam = 14.0 * std::sqrt(2.0) * sigma_np * std::sqrt(lnp / n) +
                       constants.c_alpha_poly * k_np * k_eps_r * std::pow(lnp, 1.0 / alpha) *
                           (std::pow(std::log(2.0 * n), 1.0 / alpha) + L) / std::pow(n, 1.0 - 1.0 / r);
    if (!(lam > 0.0)) throw std::invalid_argument("lambda: degenerate policy gives lambda = 0");
    return lam;
}

double error_bound_subweibull(double sigma_np, double k_np, double n, double p, double k, double gamma,
                              double lambda_min, const BoundConstants& constants) {
    if (!(lambda_min > 0.0)) throw std::invalid_argument("error bound: lambda_min must be positive");
    if (!(n >= 1.0) || !(p >= 1.0) || !(k >= 1.0)) throw std::invalid_argument("error bound: bad counts");
    if (!(gamma > 0.0)) throw std::invalid_argument("error bound: gamma must be positive");
    constants.validate();
    const double lnp = std::log(n * p);
    return 84.0 * std::sqrt(2.0) / lambda_min *
           (sigma_np * std::sqrt(k * lnp / n) +
            constants.c_gamma_lasso * k_np * k_np * std::sqrt(k) * std::pow(lnp, 2.0 / gamma) / n);
}

double resolve_lambda(const LambdaPolicy& policy, const Eigen::MatrixXd& X) {
    const double n = static_cast<double>(X.rows()), p = static_cast<double>(X.cols());
    return std::visit(
        [&](const auto& pol) -> double {
            using T = std::decay_t<decltype(pol)>;
            if constexpr (std::is_same_v<T, FixedLambda>) {
                if (!(pol.lambda > 0.0)) throw std::invalid_argument("fixed lambda must be positive");
                return pol.lambda;
            } else if constexpr (std::is_same_v<T, TheorySubWeibull>) {
                return lambda_theory_subweibull(pol.sigma_np, pol.k_np, n, p, pol.gamma, pol.constants);
            } else if constexpr (std::is_same_v<T, TheoryPoly>) {
                return lambda_theory_poly(pol.sigma_np, pol.k_np, pol.k_eps_r, n, p, pol.alpha, pol.r, pol.L,
                                          pol.constants);
            } else {
                if (pol.eps.size() != X.rows()) throw std::invalid_argument("oracle lambda: noise length mismatch");
                const double lam = pol.factor * (X.transpose() * pol.eps).template lpNorm<Eigen::Infinity>() / n;
                if (!(lam > 0.0)) throw std::invalid_argument("oracle lambda is zero");
                return lam;
            }
        },
        policy);
}

namespace {
double l1_off(const Eigen::VectorXd& v, const std::vector<int>& S) {
    std::vector<char> in(v.size(), 0);
    for (int j : S) {
        if (j < 0 || j >= v.size()) throw std::invalid_argument("index set out of range");
        in[j] = 1;
    }
    double s = 0.0;
    for (Eigen::Index j = 0; j < v.size(); ++j)
        if (!in[j]) s += std::fabs(v(j));
    return s;
}
}  // namespace

OracleBound oracle_inequality_bound(const std::vector<std::vector<int>>& candidates, double lambda,
                                    const std::function<double(int)>& xi_of_size, double lambda_min,
                                    const Eigen::VectorXd& beta0) {
    if (candidates.empty()) throw std::invalid_argument("oracle bound: empty candidate list");
    if (!(lambda > 0.0)) throw std::invalid_argument("oracle bound: lambda must be positive");
    bool any = false;
    OracleBound best{0.0, {}};
    for (const auto& raw : candidates) {
        if (raw.empty()) continue;
        auto S = raw;
        std::sort(S.begin(), S.end());
        const double s = static_cast<double>(S.size());
        const double xi = xi_of_size(static_cast<int>(S.size()));
        const double G = lambda_min - 1755.0 * xi;
        if (!(G > 0.0)) continue;
        const double off = l1_off(beta0, S);
        const double v = 18.0 * lambda * lambda * s / (G * G) + 8.0 * lambda * off / G + 3456.0 * xi * off * off / (s * G);
        const bool better = !any || v < best.value ||
                            (v == best.value && (S.size() < best.argmin_set.size() ||
                                                 (S.size() == best.argmin_set.size() && S < best.argmin_set)));
        if (better) {
            best = {v, S};
            any = true;
        }
    }
    if (!any) throw std::invalid_argument("oracle bound: Gamma(S) <= 0 for every candidate");
    return best;
}

bool cone_membership(const Eigen::VectorXd& nu, const std::vector<int>& S, const Eigen::VectorXd& beta0) {
    if (nu.size() != beta0.size()) throw std::invalid_argument("cone_membership: length mismatch");
    const double off_nu = l1_off(nu, S);
    double on_nu = 0.0;
    for (int j : S) on_nu += std::fabs(nu(j));
    return off_nu <= 3.0 * on_nu + 4.0 * l1_off(beta0, S);
}

double deterministic_error_bound(double k, double lambda, double gamma_n) {
    if (!(gamma_n > 0.0)) throw std::invalid_argument("deterministic bound: gamma must be positive");
    return 3.0 * std::sqrt(k) * lambda / gamma_n;
}

std::vector<int> support_of(const Eigen::VectorXd& v) {
    std::vector<int> s;
    for (Eigen::Index j = 0; j < v.size(); ++j)
        if (v(j) != 0.0) s.push_back(static_cast<int>(j));
    return s;
}

}  // namespace subweibull
