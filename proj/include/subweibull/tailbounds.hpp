#pragma once

#include <functional>
#include <span>
#include <vector>

#include "subweibull/constants.hpp"
#include "subweibull/orlicz.hpp"

namespace subweibull {

enum class SumBoundSource { WeightedSum, VarianceSmallAlpha, VarianceLargeAlpha };

struct SumBoundReport {
    double gbo_norm_bound = 0.0;
    double l_param = 0.0;
    double effective_alpha = 1.0;
    SumBoundSource source = SumBoundSource::WeightedSum;
    bool degenerate = false;
};

struct TailCurve {
    std::vector<double> t_values;
    std::vector<double> thresholds;
    std::vector<double> prob_bounds;
};

SumBoundReport weighted_sum_bound(std::span<const double> weights, std::span<const double> psi_norms,
                                  double alpha);

// alpha <= 1 uses the small-alpha branch (so alpha == 1 lands there).
SumBoundReport variance_sum_bound(std::span<const double> variances, double max_psi_norm, double alpha,
                                  const BoundConstants& constants);

ThresholdResult max_average_threshold(double gamma, double K, double n, double q, double alpha, double t,
                                      const BoundConstants& constants);

struct ProductNorm {
    double beta;
    double bound;
};
ProductNorm product_norm(std::span<const double> norms, std::span<const double> alphas);

// nh_p = n * h^p is passed through `n` and `h`, `p_dim` as separate inputs.
ThresholdResult kernel_deviation_threshold(double M_Y, double R_K, double C_Y, double C_K, double n, double h,
                                           double p_dim, double alpha, double t, const BoundConstants& constants);

double bernstein_subexp_tail(double sigma2, double C_n, double t);

// Evaluates `bound` along `t_values` (sorted ascending) and checks the
// monotonicity invariants, throwing InvariantViolation if they fail.
TailCurve make_tail_curve(std::span<const double> t_values, const std::function<ThresholdResult(double)>& bound);

}  // namespace subweibull
