#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace subweibull {

enum class OrliczFamily { PsiAlpha, GboPsi, GboPhi, MultiRegime };

struct Regime {
    double alpha;
    double scale_l;
};

struct OrliczSpec {
    OrliczFamily family = OrliczFamily::PsiAlpha;
    double alpha = 1.0;
    double scale_l = 0.0;
    std::vector<Regime> regimes;

    static OrliczSpec psi(double alpha);
    static OrliczSpec gbo(double alpha, double L);
    static OrliczSpec gbo_phi(double alpha, double L);
    static OrliczSpec multi(std::vector<Regime> regimes);

    // Throws std::invalid_argument on bad parameters.
    void validate() const;
};

struct NormEstimate {
    double value = 0.0;
    double tolerance = 0.0;  // half-width of the final bracket
    std::size_t evaluations = 0;
    bool degenerate = false;
};

// g(x) for the chosen family. Overflows to +inf for very large x.
double eval_function(const OrliczSpec& spec, double x);
// g^{-1}(t).
double eval_inverse(const OrliczSpec& spec, double t);
// g^{-1}(expm1(u)), i.e. the inverse written in u = log(1+t). Avoids the
// round trip through exp for large arguments.
double eval_inverse_log(const OrliczSpec& spec, double u);

// Relative bisection tolerance used inside eval_function.
inline constexpr double kInversionTol = 1e-12;
inline constexpr double kNormTol = 1e-6;

// Plug-in Orlicz norm of the empirical law of `sample`. `rel_tol` is relative
// to the bracket's upper end.
NormEstimate empirical_norm(std::span<const double> sample, const OrliczSpec& spec, double rel_tol = kNormTol);

// max over r in {1, 1+step, ..., r_max} of r^{-1/alpha} (mean |x|^r)^{1/r}.
double moment_growth_norm(std::span<const double> sample, double alpha, double r_max = 200.0,
                          double grid_step = 0.5);
// Same grid, functional (mean |x|^r)^{1/r} / (sqrt(r) + L r^{1/alpha}).
double gbo_moment_norm(std::span<const double> sample, double alpha, double L, double r_max = 200.0,
                       double grid_step = 0.5);
// True when doubling r_max changes the grid supremum by less than rel.
bool moment_grid_converged(std::span<const double> sample, double alpha, double L, double r_max,
                           double grid_step, double rel = 1e-3, bool gbo_form = false);

struct ThresholdResult {
    double threshold;
    double prob_bound;
};

ThresholdResult gbo_tail_threshold(double delta, double alpha, double L, double t);
// N is real so that log N can be set exactly.
ThresholdResult maximal_threshold(double Delta, double alpha, double L, double N, double t);
double sharper_maximal_denominator(double k, double alpha, double L, double norm_k);

}  // namespace subweibull
