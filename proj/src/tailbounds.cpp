#include "subweibull/tailbounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "subweibull/errors.hpp"

namespace subweibull {

namespace {

void check_nonneg(double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::domain_error(std::string(what) + " must be finite and >= 0");
}

void check_pos(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error(std::string(what) + " must be finite and > 0");
}

double clamp_prob(double p) { return std::min(1.0, p); }

}  // namespace

SumBoundReport weighted_sum_bound(std::span<const double> weights, std::span<const double> psi_norms,
                                  double alpha) {
    if (weights.size() != psi_norms.size()) throw std::invalid_argument("weighted_sum_bound: length mismatch");
    if (weights.empty()) throw std::invalid_argument("weighted_sum_bound: empty input");
    check_pos(alpha, "alpha");
    std::vector<double> b(weights.size());
    double two = 0.0, inf = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        check_nonneg(psi_norms[i], "psi norm");
        b[i] = std::fabs(weights[i] * psi_norms[i]);
        two += b[i] * b[i];
        inf = std::max(inf, b[i]);
    }
    two = std::sqrt(two);
    SumBoundReport r;
    r.source = SumBoundSource::WeightedSum;
    r.effective_alpha = alpha;
    if (two == 0.0) {
        r.degenerate = true;
        return r;
    }
    const double C = weighted_sum_c(alpha);
    r.gbo_norm_bound = 2.0 * std::numbers::e * C * two;
    const double lead = std::pow(4.0, 1.0 / alpha) / (std::sqrt(2.0) * two);
    if (alpha < 1.0) {
        r.l_param = lead * inf;
    } else {
        double beta_norm;
        if (alpha == 1.0) {
            beta_norm = inf;
        } else {
            const double beta = alpha / (alpha - 1.0);
            // scale by the max entry to keep b_i^beta finite
            double s = 0.0;
            for (double v : b) s += std::pow(v / inf, beta);
            beta_norm = inf * std::pow(s, 1.0 / beta);
        }
        r.l_param = lead * 4.0 * std::numbers::e * beta_norm / C;
    }
    return r;
}

SumBoundReport variance_sum_bound(std::span<const double> variances, double max_psi_norm, double alpha,
                                  const BoundConstants& constants) {
    if (variances.empty()) throw std::invalid_argument("variance_sum_bound: empty input");
    check_pos(alpha, "alpha");
    check_nonneg(max_psi_norm, "max_psi_norm");
    constants.validate();
    double total = 0.0;
    for (double v : variances) {
        check_nonneg(v, "variance");
        total += v;
    }
    SumBoundReport r;
    const bool small = alpha <= 1.0;
    r.source = small ? SumBoundSource::VarianceSmallAlpha : SumBoundSource::VarianceLargeAlpha;
    r.effective_alpha = small ? alpha : 1.0;
    if (total == 0.0) {
        r.degenerate = true;
        return r;
    }
    const double n = static_cast<double>(variances.size());
    const double root = std::sqrt(total);
    r.gbo_norm_bound = 2.0 * std::numbers::e * std::sqrt(6.0) * root;
    const double c = small ? constants.c_alpha_var_small * constants.k_alpha_lt : constants.c_alpha_var_large;
    r.l_param = std::pow(4.0, 1.0 / alpha) * c / (2.0 * std::sqrt(6.0)) * std::pow(std::log(n + 1.0), 1.0 / alpha) /
                root * max_psi_norm;
    return r;
}

ThresholdResult max_average_threshold(double gamma, double K, double n, double q, double alpha, double t,
                                      const BoundConstants& constants) {
    check_nonneg(gamma, "Gamma");
    check_nonneg(K, "K");
    check_nonneg(t, "t");
    check_pos(alpha, "alpha");
    if (!(n >= 1.0)) throw std::domain_error("n must be >= 1");
    if (!(q >= 1.0)) throw std::domain_error("q must be >= 1");
    constants.validate();
    const double s = t + std::log(q);
    const double a_star = std::min(alpha, 1.0);
    const double first = 7.0 * std::sqrt(gamma * s / n);
    const double second =
        constants.c_alpha_max_avg * K * std::pow(std::log(2.0 * n), 1.0 / alpha) * std::pow(s, 1.0 / a_star) / n;
    return {first + second, clamp_prob(3.0 * std::exp(-t))};
}

ProductNorm product_norm(std::span<const double> norms, std::span<const double> alphas) {
    if (norms.size() != alphas.size()) throw std::invalid_argument("product_norm: length mismatch");
    if (norms.empty()) throw std::invalid_argument("product_norm: empty input");
    double inv = 0.0, prod = 1.0;
    for (std::size_t i = 0; i < norms.size(); ++i) {
        check_pos(alphas[i], "alpha");
        check_nonneg(norms[i], "norm");
        inv += 1.0 / alphas[i];
        prod *= norms[i];
    }
    return {1.0 / inv, prod};
}

ThresholdResult kernel_deviation_threshold(double M_Y, double R_K, double C_Y, double C_K, double n, double h,
                                           double p_dim, double alpha, double t, const BoundConstants& constants) {
    check_nonneg(M_Y, "M_Y");
    check_nonneg(R_K, "R_K");
    check_nonneg(C_Y, "C_Y");
    check_nonneg(C_K, "C_K");
    check_nonneg(t, "t");
    check_pos(alpha, "alpha");
    check_pos(h, "h");
    if (!(n >= 1.0)) throw std::domain_error("n must be >= 1");
    constants.validate();
    const double nhp = n * std::pow(h, p_dim);
    check_pos(nhp, "n h^p");
    const double gam = std::sqrt(M_Y * R_K);
    const double ups = C_Y * C_K;
    const double a_star = std::min(alpha, 1.0);
    const double first = 7.0 * gam * std::sqrt(t) / std::sqrt(nhp);
    const double second =
        constants.c_alpha_max_avg * ups * std::pow(std::log(2.0 * n), 1.0 / alpha) * std::pow(t, 1.0 / a_star) / nhp;
    return {first + second, clamp_prob(3.0 * std::exp(-t))};
}

double bernstein_subexp_tail(double sigma2, double C_n, double t) {
    check_nonneg(sigma2, "sigma2");
    check_nonneg(C_n, "C_n");
    check_nonneg(t, "t");
    if (sigma2 == 0.0 && C_n == 0.0) throw std::invalid_argument("bernstein_subexp_tail: sigma2 and C_n both zero");
    const bool gaussian = C_n == 0.0 || t < sigma2 / C_n;
    const double p = gaussian ? 2.0 * std::exp(-t * t / (4.0 * sigma2)) : 2.0 * std::exp(-t / (4.0 * C_n));
    return clamp_prob(p);
}

TailCurve make_tail_curve(std::span<const double> t_values, const std::function<ThresholdResult(double)>& bound) {
    TailCurve c;
    for (double t : t_values) {
        if (!c.t_values.empty() && t < c.t_values.back())
            throw std::invalid_argument("make_tail_curve: t grid must be ascending");
        const auto r = bound(t);
        if (!c.thresholds.empty()) {
            if (r.threshold < c.thresholds.back()) throw InvariantViolation("tail-monotone-threshold", "decreased in t");
            if (r.prob_bound > c.prob_bounds.back()) throw InvariantViolation("tail-monotone-prob", "increased in t");
        }
        c.t_values.push_back(t);
        c.thresholds.push_back(r.threshold);
        c.prob_bounds.push_back(r.prob_bound);
    }
    return c;
}

}  // namespace subweibull
