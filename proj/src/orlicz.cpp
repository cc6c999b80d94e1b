#include "subweibull/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "subweibull/constants.hpp"

namespace subweibull {

namespace {

void require_nonneg_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::domain_error(std::string(what) + " must be finite");
    if (v < 0.0) throw std::domain_error(std::string(what) + " must be nonnegative");
}

// Solve inverse_log(u) = x for u >= 0 by bisection on [lo, hi].
double bisect_u(const OrliczSpec& spec, double x, double lo, double hi) {
    if (!std::isfinite(hi)) return hi;
    for (int it = 0; it < 400 && hi - lo > kInversionTol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (eval_inverse_log(spec, mid) < x)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double solve_u(const OrliczSpec& spec, double x) {
    if (x == 0.0) return 0.0;
    switch (spec.family) {
        case OrliczFamily::PsiAlpha:
            return std::pow(x, spec.alpha);
        case OrliczFamily::GboPhi:
            return std::min(x * x, std::pow(x / spec.scale_l, spec.alpha));
        case OrliczFamily::GboPsi: {
            const double L = spec.scale_l;
            if (L == 0.0) return x * x;
            const double hi = std::min(x * x, std::pow(x / L, spec.alpha));
            const double lo = std::min(0.25 * x * x, std::pow(x / (2.0 * L), spec.alpha));
            return bisect_u(spec, x, lo, hi);
        }
        case OrliczFamily::MultiRegime: {
            double k = 0.0;
            for (const auto& r : spec.regimes)
                if (r.scale_l > 0.0) k += 1.0;
            double hi = std::numeric_limits<double>::infinity();
            double lo = std::numeric_limits<double>::infinity();
            for (const auto& r : spec.regimes) {
                if (r.scale_l <= 0.0) continue;
                hi = std::min(hi, std::pow(x / r.scale_l, r.alpha));
                lo = std::min(lo, std::pow(x / (k * r.scale_l), r.alpha));
            }
            return bisect_u(spec, x, lo, hi);
        }
    }
    return 0.0;
}

}  // namespace

OrliczSpec OrliczSpec::psi(double alpha) {
    OrliczSpec s{OrliczFamily::PsiAlpha, alpha, 0.0, {}};
    s.validate();
    return s;
}

OrliczSpec OrliczSpec::gbo(double alpha, double L) {
    OrliczSpec s{OrliczFamily::GboPsi, alpha, L, {}};
    s.validate();
    return s;
}

OrliczSpec OrliczSpec::gbo_phi(double alpha, double L) {
    OrliczSpec s{OrliczFamily::GboPhi, alpha, L, {}};
    s.validate();
    return s;
}

OrliczSpec OrliczSpec::multi(std::vector<Regime> regimes) {
    OrliczSpec s{OrliczFamily::MultiRegime, 1.0, 0.0, std::move(regimes)};
    s.validate();
    return s;
}

void OrliczSpec::validate() const {
    if (family == OrliczFamily::MultiRegime) {
        if (regimes.empty()) throw std::invalid_argument("MultiRegime needs at least one regime");
        bool any = false;
        for (const auto& r : regimes) {
            if (!(r.alpha > 0.0) || !std::isfinite(r.alpha)) throw std::invalid_argument("regime alpha must be > 0");
            if (!(r.scale_l >= 0.0) || !std::isfinite(r.scale_l))
                throw std::invalid_argument("regime L must be >= 0");
            any = any || r.scale_l > 0.0;
        }
        if (!any) throw std::invalid_argument("MultiRegime needs some L_j > 0");
        return;
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be > 0");
    if (!(scale_l >= 0.0) || !std::isfinite(scale_l)) throw std::invalid_argument("L must be >= 0");
    if (family == OrliczFamily::GboPhi && scale_l == 0.0)
        throw std::invalid_argument("GboPhi requires L > 0");
}

double eval_inverse_log(const OrliczSpec& spec, double u) {
    switch (spec.family) {
        case OrliczFamily::PsiAlpha:
            return std::pow(u, 1.0 / spec.alpha);
        case OrliczFamily::GboPsi:
            return std::sqrt(u) + spec.scale_l * std::pow(u, 1.0 / spec.alpha);
        case OrliczFamily::GboPhi:
            return std::max(std::sqrt(u), spec.scale_l * std::pow(u, 1.0 / spec.alpha));
        case OrliczFamily::MultiRegime: {
            double s = 0.0;
            for (const auto& r : spec.regimes) s += r.scale_l * std::pow(u, 1.0 / r.alpha);
            return s;
        }
    }
    return 0.0;
}

double eval_inverse(const OrliczSpec& spec, double t) {
    require_nonneg_finite(t, "t");
    return eval_inverse_log(spec, std::log1p(t));
}

double eval_function(const OrliczSpec& spec, double x) {
    require_nonneg_finite(x, "x");
    return std::expm1(solve_u(spec, x));
}

namespace {

// mean_i g(a_i / eta) <= 1 ?  Stops summing once the total passes m.
bool mean_at_most_one(std::span<const double> abs_sample, const OrliczSpec& spec, double eta) {
    const double m = static_cast<double>(abs_sample.size());
    double sum = 0.0;
    if (spec.family == OrliczFamily::PsiAlpha) {
        const double a = spec.alpha;
        const double inv = 1.0 / eta;
        if (a == 1.0) {
            for (double v : abs_sample) {
                sum += std::expm1(v * inv);
                if (sum > m) return false;
            }
        } else if (a == 2.0) {
            for (double v : abs_sample) {
                const double z = v * inv;
                sum += std::expm1(z * z);
                if (sum > m) return false;
            }
        } else {
            for (double v : abs_sample) {
                sum += std::expm1(std::pow(v * inv, a));
                if (sum > m) return false;
            }
        }
        return sum <= m;
    }
    for (double v : abs_sample) {
        sum += std::expm1(solve_u(spec, v / eta));
        if (sum > m) return false;
    }
    return sum <= m;
}

}  // namespace

NormEstimate empirical_norm(std::span<const double> sample, const OrliczSpec& spec, double rel_tol) {
    if (sample.empty()) throw std::invalid_argument("empirical_norm: empty sample");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("empirical_norm: tol must be positive");
    spec.validate();
    std::vector<double> a(sample.size());
    double M = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (!std::isfinite(sample[i])) throw std::domain_error("empirical_norm: non-finite sample value");
        a[i] = std::fabs(sample[i]);
        M = std::max(M, a[i]);
    }
    NormEstimate est;
    if (M == 0.0) {
        est.degenerate = true;
        est.tolerance = rel_tol;
        return est;
    }
    const double m = static_cast<double>(a.size());
    // Small widening guards against rounding at the analytic bracket ends.
    double lo = M / eval_inverse(spec, m) * (1.0 - 1e-9);
    double hi = M / eval_inverse(spec, 1.0 / m) * (1.0 + 1e-9);
    std::size_t evals = 0;
    while (mean_at_most_one(a, spec, lo)) {
        lo *= 0.5;
        ++evals;
    }
    while (!mean_at_most_one(a, spec, hi)) {
        hi *= 2.0;
        ++evals;
    }
    while (hi - lo > 2.0 * rel_tol * hi) {
        const double mid = hi > 2.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        ++evals;
        if (mean_at_most_one(a, spec, mid))
            hi = mid;
        else
            lo = mid;
    }
    est.value = 0.5 * (lo + hi);
    est.tolerance = 0.5 * (hi - lo);
    est.evaluations = evals;
    return est;
}

namespace {

struct LogSample {
    std::vector<double> logs;  // log|x_i| over nonzero entries
    double log_m = 0.0;
    double lmax = -std::numeric_limits<double>::infinity();
};

LogSample make_log_sample(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("moment norm: empty sample");
    LogSample ls;
    ls.log_m = std::log(static_cast<double>(sample.size()));
    for (double v : sample) {
        if (!std::isfinite(v)) throw std::domain_error("moment norm: non-finite sample value");
        if (v != 0.0) {
            ls.logs.push_back(std::log(std::fabs(v)));
            ls.lmax = std::max(ls.lmax, ls.logs.back());
        }
    }
    return ls;
}

// log (mean |x|^r)^{1/r}
double log_lr_norm(const LogSample& ls, double r) {
    double s = 0.0;
    for (double l : ls.logs) s += std::exp(r * (l - ls.lmax));
    return ls.lmax + (std::log(s) - ls.log_m) / r;
}

double grid_sup(const LogSample& ls, double alpha, double L, double r_max, double step, bool gbo) {
    if (ls.logs.empty()) return 0.0;
    if (!(alpha > 0.0)) throw std::invalid_argument("moment norm: alpha must be positive");
    if (!(r_max >= 1.0)) throw std::invalid_argument("moment norm: r_max must be >= 1");
    if (!(step > 0.0)) throw std::invalid_argument("moment norm: grid_step must be positive");
    double best = 0.0;
    for (std::size_t i = 0;; ++i) {
        const double r = 1.0 + step * static_cast<double>(i);
        if (r > r_max * (1.0 + 1e-12)) break;
        const double norm = std::exp(log_lr_norm(ls, r));
        const double denom = gbo ? std::sqrt(r) + L * std::pow(r, 1.0 / alpha) : std::pow(r, 1.0 / alpha);
        best = std::max(best, norm / denom);
    }
    return best;
}

}  // namespace

double moment_growth_norm(std::span<const double> sample, double alpha, double r_max, double grid_step) {
    return grid_sup(make_log_sample(sample), alpha, 0.0, r_max, grid_step, false);
}

double gbo_moment_norm(std::span<const double> sample, double alpha, double L, double r_max, double grid_step) {
    if (!(L >= 0.0)) throw std::invalid_argument("gbo_moment_norm: L must be >= 0");
    return grid_sup(make_log_sample(sample), alpha, L, r_max, grid_step, true);
}

bool moment_grid_converged(std::span<const double> sample, double alpha, double L, double r_max,
                           double grid_step, double rel, bool gbo_form) {
    const auto ls = make_log_sample(sample);
    const double a = grid_sup(ls, alpha, L, r_max, grid_step, gbo_form);
    const double b = grid_sup(ls, alpha, L, 2.0 * r_max, grid_step, gbo_form);
    if (b == 0.0) return true;
    return std::fabs(b - a) <= rel * b;
}

ThresholdResult gbo_tail_threshold(double delta, double alpha, double L, double t) {
    require_nonneg_finite(delta, "delta");
    require_nonneg_finite(L, "L");
    require_nonneg_finite(t, "t");
    if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
    return {delta * (std::sqrt(t) + L * std::pow(t, 1.0 / alpha)), std::min(1.0, 2.0 * std::exp(-t))};
}

ThresholdResult maximal_threshold(double Delta, double alpha, double L, double N, double t) {
    require_nonneg_finite(Delta, "Delta");
    require_nonneg_finite(L, "L");
    require_nonneg_finite(t, "t");
    if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
    if (!(N >= 1.0) || !std::isfinite(N)) throw std::domain_error("N must be >= 1");
    const double s = t + std::log(N);
    return {Delta * (std::sqrt(s) + L * std::pow(s, 1.0 / alpha)), std::min(1.0, 2.0 * std::exp(-t))};
}

double sharper_maximal_denominator(double k, double alpha, double L, double norm_k) {
    if (!(k >= 1.0) || !std::isfinite(k)) throw std::domain_error("k must be >= 1");
    require_nonneg_finite(L, "L");
    require_nonneg_finite(norm_k, "norm_k");
    const auto spec = OrliczSpec::gbo(alpha, const_s(alpha) * L);
    return std::sqrt(2.0) * norm_k * eval_inverse(spec, k);
}

}  // namespace subweibull
