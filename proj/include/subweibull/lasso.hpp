#pragma once

#include <Eigen/Dense>
#include <functional>
#include <variant>
#include <vector>

#include "subweibull/constants.hpp"

namespace subweibull {

struct LassoProblem {
    Eigen::MatrixXd X;  // n x p
    Eigen::VectorXd y;
    void validate() const;
};

struct LassoFit {
    Eigen::VectorXd beta;
    double lambda = 0.0;
    int iterations = 0;  // coordinate sweeps, full and active-set
    bool converged = false;
    double kkt_residual = 0.0;
    double objective = 0.0;
    bool objective_monotone = true;
};

double soft_threshold(double z, double lambda);
double lasso_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                       double lambda);
// max_j violation of the subgradient optimality conditions.
double kkt_residual(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                    double lambda);

// Cyclic coordinate descent from zero. Full sweeps alternate with sweeps over
// the current nonzero set until a full sweep changes nothing beyond tol.
LassoFit solve(const LassoProblem& problem, double lambda, double tol = 1e-9, int max_iter = 100000);

struct FixedLambda {
    double lambda;
};
struct TheorySubWeibull {
    double sigma_np, k_np, gamma;
    BoundConstants constants;
};
struct TheoryPoly {
    double sigma_np, k_np, k_eps_r, alpha, r, L;
    BoundConstants constants;
};
// Simulation-only: lambda = factor * ||X^T eps / n||_inf with the true noise.
struct EmpiricalOracle {
    Eigen::VectorXd eps;
    double factor = 2.0;
};
using LambdaPolicy = std::variant<FixedLambda, TheorySubWeibull, TheoryPoly, EmpiricalOracle>;

double resolve_lambda(const LambdaPolicy& policy, const Eigen::MatrixXd& X);

double lambda_theory_subweibull(double sigma_np, double k_np, double n, double p, double gamma,
                                const BoundConstants& constants);
double lambda_theory_poly(double sigma_np, double k_np, double k_eps_r, double n, double p, double alpha, double r,
                          double L, const BoundConstants& constants);
double error_bound_subweibull(double sigma_np, double k_np, double n, double p, double k, double gamma,
                              double lambda_min, const BoundConstants& constants);

struct OracleBound {
    double value;
    std::vector<int> argmin_set;
};
OracleBound oracle_inequality_bound(const std::vector<std::vector<int>>& candidates, double lambda,
                                    const std::function<double(int)>& xi_of_size, double lambda_min,
                                    const Eigen::VectorXd& beta0);

bool cone_membership(const Eigen::VectorXd& nu, const std::vector<int>& S, const Eigen::VectorXd& beta0);

// 3 sqrt(k) lambda / gamma
double deterministic_error_bound(double k, double lambda, double gamma_n);

std::vector<int> support_of(const Eigen::VectorXd& v);

}  // namespace subweibull
