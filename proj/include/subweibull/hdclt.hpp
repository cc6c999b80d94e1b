#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <vector>

#include "subweibull/constants.hpp"
#include "subweibull/rng.hpp"
#include "subweibull/samplers.hpp"

namespace subweibull {

enum class MaxStatSource { Data, GaussianAnalog, Bootstrap };

struct MaxStatSample {
    std::vector<double> values;
    long n = 0;
    long q = 0;
    MaxStatSource source = MaxStatSource::Data;
};

// max_j n^{-1/2} sum_i W_i(j)
double max_statistic(const Eigen::MatrixXd& W);

MaxStatSample gaussian_analog_sample(const Eigen::MatrixXd& sigma, long n_eff, long reps, const RngStream& rng,
                                     unsigned workers = 1);

// Replications of the data max statistic under `law` (mean subtracted).
// Iid Gaussian and iid Exponential laws use the exact law of the column
// sums; other laws are simulated row by row.
MaxStatSample data_max_sample(const VectorLaw& law, long n, long reps, const RngStream& rng, unsigned workers = 1);

// Kolmogorov distance of the two samples evaluated at `grid`+1 pooled
// quantiles; grid == 0 uses every pooled point.
double rho_rectangle_proxy(const MaxStatSample& a, const MaxStatSample& b, int grid);

struct HdcltBound {
    double bound;
    bool condition_ok;
};
HdcltBound hdclt_bound(double L_nq, double K_nq, double n, double q, double beta, double B,
                       const BoundConstants& constants);

struct BootstrapResult {
    std::map<double, double> quantiles;
    long draws = 0;
    Eigen::MatrixXd sigma_star;
    std::optional<double> delta_star;
    std::vector<double> values;
};

BootstrapResult multiplier_bootstrap(const Eigen::MatrixXd& W, long draws, const std::vector<double>& levels,
                                     const RngStream& rng, const Eigen::MatrixXd* reference = nullptr);

double bootstrap_error_bound(double delta_star, double p, double C);

struct CoverageResult {
    double coverage;
    double mc_se;
    std::vector<double> statistics;       // T per replication
    std::vector<double> critical_values;  // bootstrap quantile per replication
};
CoverageResult coverage_experiment(const VectorLaw& law, long n, long q, double nominal, long reps, long draws,
                                   const RngStream& rng, unsigned workers = 1);

}  // namespace subweibull
