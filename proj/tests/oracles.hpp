#pragma once

// Independent reference implementations used only by the tests.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "subweibull/rng.hpp"

namespace oracle {

// inf{eta : mean(exp(|x|^a / eta^a)) <= 2} by plain bisection on a log-sum-exp.
inline double psi_norm(std::span<const double> x, double alpha) {
    double mx = 0.0;
    for (double v : x) mx = std::max(mx, std::fabs(v));
    if (mx == 0.0) return 0.0;
    auto excess = [&](double eta) {
        double top = -INFINITY;
        std::vector<double> e(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) top = std::max(top, e[i] = std::pow(std::fabs(x[i]) / eta, alpha));
        double s = 0.0;
        for (double v : e) s += std::exp(v - top);
        return top + std::log(s / static_cast<double>(x.size())) - std::log(2.0);
    };
    double lo = 1e-8 * mx, hi = mx;
    while (excess(hi) > 0) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Lasso by accelerated projected gradient on the split theta = u - v with u, v >= 0.
inline Eigen::VectorXd lasso_split_pg(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                                      int iters = 100000) {
    const double n = static_cast<double>(X.rows());
    const Eigen::Index p = X.cols();
    const Eigen::MatrixXd A = X.transpose() * X / n;
    const Eigen::VectorXd b = X.transpose() * y / n;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    const double step = 1.0 / (2.0 * es.eigenvalues().maxCoeff());
    Eigen::VectorXd u = Eigen::VectorXd::Zero(p), v = u, uy = u, vy = v;
    double tk = 1.0;
    for (int it = 0; it < iters; ++it) {
        const Eigen::VectorXd g = A * (uy - vy) - b;  // gradient of the smooth part in theta
        const Eigen::VectorXd un = (uy - step * (g.array() + lambda).matrix()).cwiseMax(0.0);
        const Eigen::VectorXd vn = (vy - step * (-g.array() + lambda).matrix()).cwiseMax(0.0);
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
        uy = un + ((tk - 1.0) / tn) * (un - u);
        vy = vn + ((tk - 1.0) / tn) * (vn - v);
        u = un, v = vn, tk = tn;
    }
    return u - v;
}

inline double lasso_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                              double lambda) {
    return (y - X * beta).squaredNorm() / (2.0 * static_cast<double>(X.rows())) + lambda * beta.lpNorm<1>();
}

// max |theta' D theta| over random unit vectors supported on random k-subsets.
inline double rip_random_search(const Eigen::MatrixXd& D, int k, long samples, subweibull::RngStream rng) {
    const int p = static_cast<int>(D.rows());
    double best = 0.0;
    std::vector<int> idx(p);
    Eigen::VectorXd th(k);
    for (long s = 0; s < samples; ++s) {
        for (int j = 0; j < p; ++j) idx[j] = j;
        for (int i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.next_u64() % (p - i)]);
        for (int i = 0; i < k; ++i) th(i) = rng.normal();
        th.normalize();
        double q = 0.0;
        for (int a = 0; a < k; ++a)
            for (int c = 0; c < k; ++c) q += th(a) * D(idx[a], idx[c]) * th(c);
        best = std::max(best, std::fabs(q));
    }
    return best;
}

inline Eigen::MatrixXd random_symmetric(int p, subweibull::RngStream rng) {
    Eigen::MatrixXd D(p, p);
    for (int j = 0; j < p; ++j)
        for (int i = 0; i <= j; ++i) D(i, j) = D(j, i) = rng.normal();
    return D;
}

}  // namespace oracle
