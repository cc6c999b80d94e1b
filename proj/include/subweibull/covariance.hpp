#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "subweibull/constants.hpp"
#include "subweibull/orlicz.hpp"
#include "subweibull/rng.hpp"
#include "subweibull/samplers.hpp"

namespace subweibull {

struct GramPair {
    Eigen::MatrixXd sigma_hat;
    Eigen::MatrixXd sigma;
    bool centered = false;
};

Eigen::MatrixXd gram(const Eigen::MatrixXd& X);
inline Eigen::MatrixXd gram(const DataMatrix& X) { return gram(X.values); }
Eigen::MatrixXd centered_cov(const Eigen::MatrixXd& X);
inline Eigen::MatrixXd centered_cov(const DataMatrix& X) { return centered_cov(X.values); }

// Sample vs population pair for a law; centered selects the covariance version.
GramPair make_gram_pair(const DataMatrix& X, bool centered);

// max over the upper triangle (diagonal included) of |A - B|.
double max_elementwise_error(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

ThresholdResult delta_bound(double a_np, double k_np, double n, double p, double alpha, double t,
                            const BoundConstants& constants, bool centered);

Eigen::MatrixXd hard_threshold(const Eigen::MatrixXd& M, double lambda);

enum class RipMethod { Exact, QuarterNet };

struct RipResult {
    double value = 0.0;
    int k = 0;
    RipMethod method = RipMethod::Exact;
    std::uint64_t supports_evaluated = 0;
    std::uint64_t net_size = 0;
    bool exhaustive = true;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 200000;

double binomial_coefficient(int n, int k);

// Spectral norm of a symmetric matrix (largest absolute eigenvalue).
double spectral_norm_sym(const Eigen::MatrixXd& A);

RipResult rip_exact(const Eigen::MatrixXd& D, int k, std::uint64_t cap = kDefaultEnumerationCap);

// A 1/4-net of the k-sparse unit sphere in R^p stored as supports times a
// shared mesh of the unit sphere in R^k. The mesh is the radial projection of
// a cube-surface grid with spacing at most 1/(2 sqrt(k-1)).
struct QuarterNet {
    int k = 1;
    int p = 1;
    std::vector<std::vector<int>> supports;
    Eigen::MatrixXd mesh;  // k x m, unit columns
    bool exhaustive = true;

    std::uint64_t size() const { return static_cast<std::uint64_t>(supports.size()) * mesh.cols(); }
    Eigen::VectorXd vector(std::size_t support, Eigen::Index column) const;
};

Eigen::MatrixXd sphere_quarter_mesh(int k);
QuarterNet quarter_net(int k, int p, std::uint64_t cap, const RngStream& rng);
RipResult rip_net(const Eigen::MatrixXd& D, int k, const QuarterNet& net);

// Net lower approximation of Upsilon_{n,k}: max over the net of the
// empirical variance (divisor n) of (X_i^T theta)^2.
double upsilon_estimate(const Eigen::MatrixXd& X, int k, const QuarterNet& net);

struct RsConvexityParams {
    double upsilon = 0.0;
    double k_np = 0.0;
    double n = 1.0;
    double p = 1.0;
    double k = 1.0;
    double alpha = 1.0;
    double c_alpha = 1.0;
};

double xi_bound(const RsConvexityParams& params, bool joint);

struct ReReport {
    double lambda_min = 0.0;
    double xi = 0.0;
    bool satisfied = false;
    double gamma_n = 0.0;
    int k = 0;
};

inline constexpr double kReFactor = 1782.0;

ReReport re_check(const Eigen::MatrixXd& sigma, double xi, int k);
// Same verdict when the smallest eigenvalue of sigma is already known.
ReReport re_verdict(double lambda_min, double xi, int k);
double min_eigenvalue_sym(const Eigen::MatrixXd& A);
double rsc_lower(const Eigen::VectorXd& theta, double lambda_min, double xi, int k);

// Minimum Rayleigh quotient of sigma_hat over `trials` random members of the
// cone {||theta(S^c)||_1 <= delta ||theta(S)||_1}. Upper-bounds the true
// cone minimum.
double cone_min_oracle(const Eigen::MatrixXd& sigma_hat, const std::vector<int>& S, double delta, int trials,
                       const RngStream& rng);

}  // namespace subweibull
