#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace subweibull {

double median(std::vector<double> v);
// Type-7 (linear interpolation) quantile of an ascending-sorted sample.
double quantile_sorted(std::span<const double> sorted, double level);
double quantile(std::vector<double> v, double level);
// sup_u |F_a(u) - F_b(u)| over all u.
double ks_distance(std::vector<double> a, std::vector<double> b);
double binomial_se(double p, double n);

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
};
OlsFit ols(std::span<const double> x, std::span<const double> y);
// OLS on (log x, log y); all values must be positive.
OlsFit loglog_fit(std::span<const double> x, std::span<const double> y);

}  // namespace subweibull
