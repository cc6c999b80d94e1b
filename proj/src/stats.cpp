#include "subweibull/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subweibull {

double quantile_sorted(std::span<const double> s, double level) {
    if (s.empty()) throw std::invalid_argument("quantile of empty sample");
    if (!(level >= 0.0 && level <= 1.0)) throw std::invalid_argument("quantile level outside [0,1]");
    const double h = level * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

double quantile(std::vector<double> v, double level) {
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, level);
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() || j < b.size()) {
        double u;
        if (j == b.size() || (i < a.size() && a[i] <= b[j]))
            u = a[i];
        else
            u = b[j];
        while (i < a.size() && a[i] <= u) ++i;
        while (j < b.size() && b[j] <= u) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double binomial_se(double p, double n) {
    if (!(n > 0.0)) throw std::invalid_argument("binomial_se: n must be positive");
    return std::sqrt(std::max(p * (1.0 - p), 0.0) / n);
}

OlsFit ols(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ols: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols: x has zero spread");
    OlsFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (x.size() > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - f.intercept - f.slope * x[i];
            rss += r * r;
        }
        f.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
    }
    return f;
}

OlsFit loglog_fit(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0)) throw std::domain_error("loglog_fit: nonpositive x");
        lx[i] = std::log(x[i]);
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0)) throw std::domain_error("loglog_fit: nonpositive y");
        ly[i] = std::log(y[i]);
    }
    return ols(lx, ly);
}

}  // namespace subweibull
