#include "subweibull/hdclt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "subweibull/covariance.hpp"
#include "subweibull/parallel.hpp"
#include "subweibull/stats.hpp"

namespace subweibull {

double max_statistic(const Eigen::MatrixXd& W) {
    if (W.rows() < 1 || W.cols() < 1) throw std::invalid_argument("max_statistic: empty matrix");
    // rows accumulated in order so each column sum is independent of its position
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(W.cols());
    for (Eigen::Index i = 0; i < W.rows(); ++i) acc += W.row(i);
    return acc.maxCoeff() / std::sqrt(static_cast<double>(W.rows()));
}

namespace {

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() == 0)
        throw std::invalid_argument("covariance must be square and nonempty");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sigma + sigma.transpose()));
    Eigen::VectorXd ev = es.eigenvalues();
    const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -1e-10 * scale) throw std::invalid_argument("covariance is indefinite beyond clip tolerance");
        ev(i) = std::sqrt(std::max(ev(i), 0.0));
    }
    return es.eigenvectors() * ev.asDiagonal();
}

}  // namespace

MaxStatSample gaussian_analog_sample(const Eigen::MatrixXd& sigma, long n_eff, long reps, const RngStream& rng,
                                     unsigned workers) {
    if (reps < 1) throw std::invalid_argument("gaussian_analog_sample: reps must be >= 1");
    const Eigen::MatrixXd A = psd_factor(sigma);
    const Eigen::Index q = A.rows();
    MaxStatSample out;
    out.n = n_eff;
    out.q = static_cast<long>(q);
    out.source = MaxStatSource::GaussianAnalog;
    out.values.resize(static_cast<std::size_t>(reps));
    parallel_for(static_cast<std::size_t>(reps), workers, [&](std::size_t r) {
        RngStream s = rng.child(r);
        Eigen::VectorXd z(q);
        for (Eigen::Index j = 0; j < q; ++j) z(j) = s.normal();
        out.values[r] = (A * z).maxCoeff();
    });
    return out;
}

MaxStatSample data_max_sample(const VectorLaw& law, long n, long reps, const RngStream& rng, unsigned workers) {
    if (n < 1 || reps < 1) throw std::invalid_argument("data_max_sample: n and reps must be >= 1");
    law.validate();
    MaxStatSample out;
    out.n = n;
    out.q = static_cast<long>(law.p);
    out.source = MaxStatSource::Data;
    out.values.resize(static_cast<std::size_t>(reps));
    const double rn = std::sqrt(static_cast<double>(n));
    const auto& m = law.marginal;
    const bool iid = law.kind == VectorKind::Iid;
    const Eigen::VectorXd mu = law.mean();
    parallel_for(static_cast<std::size_t>(reps), workers, [&](std::size_t r) {
        RngStream s = rng.child(r);
        double best = -std::numeric_limits<double>::infinity();
        if (iid && m.kind == ScalarKind::Gaussian) {
            for (Eigen::Index j = 0; j < law.p; ++j) best = std::max(best, m.a * s.normal());
        } else if (iid && m.kind == ScalarKind::Exponential) {
            // sum of n Exp(rate) is Gamma(n)/rate
            const double nd = static_cast<double>(n);
            for (Eigen::Index j = 0; j < law.p; ++j) best = std::max(best, (s.gamma(nd) - nd) / (m.a * rn));
        } else {
            const DataMatrix W = draw_matrix(law, n, s);
            const Eigen::RowVectorXd sums = W.values.colwise().sum() - static_cast<double>(n) * mu.transpose();
            best = sums.maxCoeff() / rn;
        }
        out.values[r] = best;
    });
    return out;
}

double rho_rectangle_proxy(const MaxStatSample& a, const MaxStatSample& b, int grid) {
    if (a.values.empty() || b.values.empty()) throw std::invalid_argument("rho proxy: empty sample");
    if (grid < 0) throw std::invalid_argument("rho proxy: grid must be >= 0");
    if (grid == 0) return ks_distance(a.values, b.values);
    std::vector<double> sa = a.values, sb = b.values, pooled = a.values;
    pooled.insert(pooled.end(), b.values.begin(), b.values.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::sort(pooled.begin(), pooled.end());
    double d = 0.0;
    for (int i = 0; i <= grid; ++i) {
        const double u = quantile_sorted(pooled, static_cast<double>(i) / grid);
        const double fa = static_cast<double>(std::upper_bound(sa.begin(), sa.end(), u) - sa.begin()) / sa.size();
        const double fb = static_cast<double>(std::upper_bound(sb.begin(), sb.end(), u) - sb.begin()) / sb.size();
        d = std::max(d, std::fabs(fa - fb));
    }
    return d;
}

HdcltBound hdclt_bound(double L, double K, double n, double q, double beta, double B,
                       const BoundConstants& constants) {
    if (!(L > 0.0) || !(K > 0.0) || !(n > 0.0) || !(q >= 1.0) || !(beta > 0.0) || !(B > 0.0))
        throw std::invalid_argument("hdclt_bound: inputs must be positive (q >= 1)");
    constants.validate();
    const double lq = std::log(q);
    const double bound = constants.k1_clt * std::pow(L * L * std::pow(lq, 7.0) / n, 1.0 / 6.0) +
                         constants.c_beta_b_clt * std::pow(K, 6.0) * lq / n;
    bool ok = true;  // q == 1: log q = 0, condition taken as satisfied
    if (q > 1.0) {
        const double lhs = std::cbrt(n * L / lq) / (8.0 * constants.k2_clt * K);
        const double rhs = std::max(1.0, std::pow(2.0, 1.0 / beta - 1.0)) *
                           (std::pow(lq, 1.0 / beta) + std::pow(6.0 / beta, 1.0 / beta) + 1.0);
        ok = lhs >= rhs;
    }
    return {bound, ok};
}

BootstrapResult multiplier_bootstrap(const Eigen::MatrixXd& W, long draws, const std::vector<double>& levels,
                                     const RngStream& rng, const Eigen::MatrixXd* reference) {
    const Eigen::Index n = W.rows();
    if (n < 2) throw std::invalid_argument("multiplier_bootstrap: need n >= 2");
    if (draws < 1) throw std::invalid_argument("multiplier_bootstrap: draws must be >= 1");
    for (double l : levels)
        if (!(l > 0.0 && l < 1.0)) throw std::invalid_argument("multiplier_bootstrap: levels must lie in (0,1)");
    const Eigen::RowVectorXd mean = W.colwise().mean();
    const Eigen::MatrixXd Wc = W.rowwise() - mean;
    BootstrapResult res;
    res.draws = draws;
    res.sigma_star = centered_cov(W);
    if (reference) res.delta_star = max_elementwise_error(res.sigma_star, *reference);
    res.values.resize(static_cast<std::size_t>(draws));
    const double rn = std::sqrt(static_cast<double>(n));
    // multipliers in blocks of draws so the products run as matrix products
    constexpr long kBlock = 64;
    Eigen::MatrixXd E(kBlock, n);
    for (long start = 0; start < draws; start += kBlock) {
        const long m = std::min(kBlock, draws - start);
        for (long d = 0; d < m; ++d) {
            RngStream s = rng.child(static_cast<std::uint64_t>(start + d));
            for (Eigen::Index i = 0; i < n; ++i) E(d, i) = s.normal();
        }
        const Eigen::MatrixXd S = E.topRows(m) * Wc;
        for (long d = 0; d < m; ++d) res.values[static_cast<std::size_t>(start + d)] = S.row(d).maxCoeff() / rn;
    }
    std::vector<double> sorted = res.values;
    std::sort(sorted.begin(), sorted.end());
    for (double l : levels) res.quantiles[l] = quantile_sorted(sorted, l);
    return res;
}

double bootstrap_error_bound(double delta_star, double p, double C) {
    if (!(delta_star >= 0.0)) throw std::invalid_argument("bootstrap bound: delta_star must be >= 0");
    if (!(p >= 2.0)) throw std::invalid_argument("bootstrap bound: p must be >= 2");
    if (!(C > 0.0)) throw std::invalid_argument("bootstrap bound: C must be positive");
    return C * std::cbrt(delta_star) * std::pow(std::log(p), 2.0 / 3.0);
}

CoverageResult coverage_experiment(const VectorLaw& law, long n, long q, double nominal, long reps, long draws,
                                   const RngStream& rng, unsigned workers) {
    if (reps < 100) throw std::invalid_argument("coverage_experiment: reps must be >= 100");
    if (law.p != q) throw std::invalid_argument("coverage_experiment: law dimension must equal q");
    if (!(nominal > 0.0 && nominal < 1.0)) throw std::invalid_argument("coverage_experiment: nominal in (0,1)");
    const Eigen::RowVectorXd mu = law.mean().transpose();
    std::vector<char> covered(static_cast<std::size_t>(reps), 0);
    std::vector<double> stats(static_cast<std::size_t>(reps)), crit(static_cast<std::size_t>(reps));
    parallel_for(static_cast<std::size_t>(reps), workers, [&](std::size_t r) {
        const RngStream s = rng.child(r);
        const DataMatrix W = draw_matrix(law, n, s.child(0));
        const double T = max_statistic(W.values.rowwise() - mu);
        const auto boot = multiplier_bootstrap(W.values, draws, {nominal}, s.child(1));
        stats[r] = T;
        crit[r] = boot.quantiles.at(nominal);
        covered[r] = T <= crit[r] ? 1 : 0;
    });
    double c = 0.0;
    for (char v : covered) c += v;
    c /= static_cast<double>(reps);
    return {c, binomial_se(c, static_cast<double>(reps)), std::move(stats), std::move(crit)};
}

}  // namespace subweibull
