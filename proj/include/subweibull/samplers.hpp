#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "subweibull/rng.hpp"

namespace subweibull {

enum class ScalarKind { SymmetricWeibull, Gaussian, Exponential, Pareto, StudentT, Constant };

// a and b are kind-specific: Weibull (alpha, scale), Gaussian (sigma, -),
// Exponential (rate, -), Pareto (shape r, scale), StudentT (dof, -),
// Constant (c, -). Pareto is symmetrized by an independent sign.
struct ScalarLaw {
    ScalarKind kind = ScalarKind::Gaussian;
    double a = 1.0;
    double b = 1.0;
    bool centered = false;  // Exponential only: subtract the mean 1/rate

    static ScalarLaw symmetric_weibull(double alpha, double scale = 1.0);
    static ScalarLaw gaussian(double sigma = 1.0);
    static ScalarLaw exponential(double rate = 1.0, bool centered = false);
    static ScalarLaw pareto(double shape, double scale = 1.0);
    static ScalarLaw student_t(double dof);
    static ScalarLaw constant(double c);

    void validate() const;
    std::string describe() const;

    double mean() const;
    double second_moment() const;  // +inf when infinite
    double variance() const { return second_moment() - mean() * mean(); }
    // Natural Orlicz order and the exact psi norm for laws where it is known.
    std::optional<std::pair<double, double>> psi_norm() const;

    // Image of a standard normal z under F^{-1}(Phi(z)), computed through the
    // appropriate tail to keep precision for |z| large.
    double from_normal(double z) const;
};

double draw_scalar(const ScalarLaw& law, RngStream& rng);
// Inverse-transform core of the Weibull sampler with explicit inputs.
double symmetric_weibull_from_uniform(double alpha, double scale, double u, bool positive);

enum class VectorKind { Iid, GaussianCopula, Identical, LinearMap };

struct VectorLaw {
    VectorKind kind = VectorKind::Iid;
    ScalarLaw marginal;
    Eigen::Index p = 1;
    double rho = 0.0;         // GaussianCopula equicorrelation in [0, 1]
    Eigen::MatrixXd factor;   // LinearMap: p x m, innovations have length m

    static VectorLaw iid(ScalarLaw law, Eigen::Index p);
    static VectorLaw gaussian_copula(double rho, ScalarLaw law, Eigen::Index p);
    static VectorLaw identical(ScalarLaw law, Eigen::Index p);
    static VectorLaw linear_map(Eigen::MatrixXd factor, ScalarLaw law);

    void validate() const;
    std::string describe() const;

    Eigen::VectorXd mean() const;
    Eigen::MatrixXd population_gram() const;  // E[X X^T]
    Eigen::MatrixXd population_cov() const;
    Eigen::VectorXd coordinate_variances() const;
    double gamma_max() const;  // max_j E X(j)^2
    // Marginal psi norm (order, value) when the marginal law has one in closed form.
    std::optional<std::pair<double, double>> marginal_psi_norm() const;

    void draw_row(RngStream& rng, double* out, Eigen::Index stride) const;
};

struct DataMatrix {
    Eigen::MatrixXd values;  // n x p
    VectorLaw law;
    Eigen::Index n() const { return values.rows(); }
    Eigen::Index p() const { return values.cols(); }
};

// Row i is drawn from rng.child(i), so rows do not depend on each other.
DataMatrix draw_matrix(const VectorLaw& law, Eigen::Index n, const RngStream& rng);

using ResponseMap = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)>;

struct RegressionData {
    DataMatrix X;
    Eigen::VectorXd y;
    Eigen::VectorXd eps;
    Eigen::VectorXd beta0;
};

// Misspecified mode replaces beta0 by population_beta0(design, misspec).
RegressionData make_regression(const VectorLaw& design, const Eigen::VectorXd& beta0, const ScalarLaw& noise,
                               Eigen::Index n, const ResponseMap& misspec, const RngStream& rng,
                               Eigen::Index oracle_n = 1000000);

Eigen::VectorXd population_beta0(const VectorLaw& design, const ResponseMap& response, Eigen::Index oracle_n,
                                 const RngStream& rng);

// Little-endian f64, row-major, plus `path + ".meta"` holding "n p seed".
void write_matrix_binary(const Eigen::MatrixXd& values, std::uint64_t seed, const std::string& path);
Eigen::MatrixXd read_matrix_binary(const std::string& path, std::uint64_t* seed_out = nullptr);

// 1-D Gauss-Hermite rule for E f(Z), Z standard normal.
struct GaussHermite {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;  // sum to 1
};
GaussHermite gauss_hermite(int order);

}  // namespace subweibull
