#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "subweibull/lasso.hpp"

using namespace subweibull;

namespace {

LassoProblem random_problem(int n, int p, std::uint64_t seed) {
    RngStream r(seed, 0);
    LassoProblem pr{Eigen::MatrixXd(n, p), Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < pr.X.size(); ++i) pr.X.data()[i] = r.normal();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
    b.head(std::min(3, p)).setConstant(1.0);
    pr.y = pr.X * b;
    for (int i = 0; i < n; ++i) pr.y(i) += 0.5 * r.normal();
    return pr;
}

}  // namespace

TEST_CASE("soft threshold") {
    CHECK(soft_threshold(2.0, 0.5) == 1.5);
    CHECK(soft_threshold(-0.3, 0.5) == 0.0);
    CHECK(soft_threshold(-0.7, 0.5) == doctest::Approx(-0.2));
    for (double z : {-3.0, 0.0, 1e-9, 7.5}) CHECK(soft_threshold(z, 0.0) == z);
}

TEST_CASE("shrink to zero") {
    const auto pr = random_problem(50, 6, 40);
    const double top = (pr.X.transpose() * pr.y).cwiseAbs().maxCoeff() / 50.0;
    for (double f : {1.0, 1.5, 10.0}) {
        const auto fit = solve(pr, f * top);
        CHECK(fit.converged);
        CHECK(fit.beta.cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(solve(pr, 0.9 * top).beta.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("single standardized predictor") {
    Eigen::MatrixXd X(4, 1);
    X << 1, -1, 1, -1;
    Eigen::VectorXd y(4);
    y << 2, -1, 0.5, 0.3;
    const double z = X.col(0).dot(y) / 4.0;
    for (double lam : {0.01, 0.3, 0.8, 2.0}) {
        const auto fit = solve({X, y}, lam, 1e-12);
        CHECK(fit.beta(0) == doctest::Approx(soft_threshold(z, lam)).epsilon(1e-12));
    }
}

TEST_CASE("coordinate descent matches the split projected-gradient oracle") {
    const auto pr = random_problem(40, 8, 41);
    const auto fit = solve(pr, 0.1, 1e-12);
    REQUIRE(fit.converged);
    const Eigen::VectorXd ref = oracle::lasso_split_pg(pr.X, pr.y, 0.1);
    const double fo = oracle::lasso_objective(pr.X, pr.y, ref, 0.1);
    const double fs = oracle::lasso_objective(pr.X, pr.y, fit.beta, 0.1);
    CHECK(std::fabs(fs - fo) <= 1e-6 * fo);
    CHECK(fs <= fo * (1 + 1e-12));
    CHECK(fit.objective == doctest::Approx(fs).epsilon(1e-12));
    CHECK((fit.beta - ref).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("kkt certificate and fit invariants") {
    for (int s = 0; s < 10; ++s) {
        const auto pr = random_problem(60 + 10 * s, 15, 100 + s);
        const double lam = 0.02 + 0.03 * s;
        const double tol = 1e-9;
        const auto fit = solve(pr, lam, tol);
        REQUIRE(fit.converged);
        CHECK(fit.objective_monotone);
        CHECK(fit.kkt_residual <= 10 * tol);
        const double n = static_cast<double>(pr.X.rows());
        const Eigen::VectorXd g = pr.X.transpose() * (pr.y - pr.X * fit.beta) / n;
        for (Eigen::Index j = 0; j < g.size(); ++j) {
            if (fit.beta(j) == 0.0)
                CHECK(std::fabs(g(j)) <= lam + 10 * tol);
            else
                CHECK(std::fabs(g(j) - lam * (fit.beta(j) > 0 ? 1.0 : -1.0)) <= 10 * tol);
        }
        CHECK(fit.objective <= lasso_objective(pr.X, pr.y, Eigen::VectorXd::Zero(15), lam));
        CHECK(kkt_residual(pr.X, pr.y, fit.beta, lam) == doctest::Approx(fit.kkt_residual));
    }
}

TEST_CASE("max_iter exhaustion reports non-convergence") {
    const auto pr = random_problem(40, 8, 42);
    const auto fit = solve(pr, 0.01, 1e-14, 1);
    CHECK_FALSE(fit.converged);
}

TEST_CASE("theory lambdas") {
    BoundConstants c;
    CHECK_THROWS_AS(lambda_theory_subweibull(0, 0, 1e4, 100, 1, c), std::invalid_argument);
    const double a = lambda_theory_subweibull(1, 0, 1e4, 100, 1, c);
    CHECK(a == doctest::Approx(0.7359130477659704).epsilon(1e-14));
    CHECK(a == doctest::Approx(14 * std::sqrt(2.0) * std::sqrt(std::log(1e6) / 1e4)));
    CHECK(lambda_theory_subweibull(2, 0, 1e4, 100, 1, c) == doctest::Approx(2 * a).epsilon(1e-15));

    const double hand = 14 * std::sqrt(2.0) * std::sqrt(std::log(1e6) / 1e4) +
                        std::sqrt(std::log(1e6)) * (std::sqrt(std::log(2e4)) + 1.0) / std::pow(1e4, 0.75);
    const double poly = lambda_theory_poly(1, 1, 1, 1e4, 100, 2, 4, 1, c);
    CHECK(poly == doctest::Approx(hand).epsilon(1e-14));
    CHECK(poly == doctest::Approx(0.7513270523621016).epsilon(1e-14));
    CHECK(lambda_theory_poly(1, 0, 1, 1e4, 100, 2, 4, 1, c) == doctest::Approx(a));
    // large r approaches the 1/n scaling
    const double big = lambda_theory_poly(0, 1, 1, 1e4, 100, 2, 1e12, 1, c);
    CHECK(big * 1e4 == doctest::Approx(std::sqrt(std::log(1e6)) * (std::sqrt(std::log(2e4)) + 1.0)).epsilon(1e-6));
    CHECK_THROWS(lambda_theory_poly(1, 1, 1, 1e4, 100, 2, 1.5, 1, c));
    CHECK_THROWS(lambda_theory_poly(1, 1, 1, 1e4, 100, 2, 4, 0.5, c));
}

TEST_CASE("error bound homogeneity") {
    BoundConstants c;
    CHECK(error_bound_subweibull(0, 0, 1e4, 100, 5, 1, 1, c) == 0.0);
    const double b1 = error_bound_subweibull(1, 0, 1e4, 100, 4, 1, 1, c);
    CHECK(error_bound_subweibull(1, 0, 1e4, 100, 16, 1, 1, c) == doctest::Approx(2 * b1));
    const double b2 = error_bound_subweibull(1, 1, 1e4, 100, 4, 1, 1, c);
    CHECK(error_bound_subweibull(1, 1, 1e4, 100, 4, 1, 0.5, c) == doctest::Approx(2 * b2));
    CHECK_THROWS(error_bound_subweibull(1, 1, 1e4, 100, 4, 1, 0, c));
}

TEST_CASE("oracle inequality bound") {
    Eigen::VectorXd b0 = Eigen::VectorXd::Zero(5);
    b0(0) = 1, b0(1) = -2;
    auto zero = [](int) { return 0.0; };
    auto r = oracle_inequality_bound({{0, 1}}, 0.1, zero, 2.0, b0);
    CHECK(r.value == doctest::Approx(18 * 0.01 * 2 / 4.0));
    r = oracle_inequality_bound({{0}}, 0.1, zero, 2.0, Eigen::VectorXd::Zero(5));
    CHECK(r.value == doctest::Approx(18 * 0.01 / 4.0));
    // {0,1} removes all tail mass, {0,1,2} only adds size
    r = oracle_inequality_bound({{0, 1, 2}, {1, 0}}, 0.1, zero, 2.0, b0);
    CHECK(r.argmin_set == std::vector<int>{0, 1});
    // equal values tie-break to the lexicographically smaller set
    r = oracle_inequality_bound({{3}, {2}}, 0.1, zero, 2.0, Eigen::VectorXd::Zero(5));
    CHECK(r.argmin_set == std::vector<int>{2});
    CHECK_THROWS(oracle_inequality_bound({}, 0.1, zero, 2.0, b0));
    CHECK_THROWS(oracle_inequality_bound({{0}}, 0.1, [](int) { return 1.0; }, 2.0, b0));
}

TEST_CASE("cone membership and deterministic bound") {
    const std::vector<int> S{0, 1};
    const Eigen::VectorXd b0 = Eigen::VectorXd::Zero(4);
    CHECK(cone_membership(Eigen::VectorXd::Zero(4), S, b0));
    Eigen::VectorXd nu = Eigen::VectorXd::Zero(4);
    nu(1) = 3;
    CHECK(cone_membership(nu, S, b0));
    nu.setZero();
    nu(3) = 1;
    CHECK_FALSE(cone_membership(nu, S, b0));
    Eigen::VectorXd b1 = b0;
    b1(2) = 0.25;
    CHECK(cone_membership(nu, S, b1));
    CHECK(deterministic_error_bound(4, 0.1, 0.5) == doctest::Approx(1.2));
    CHECK(support_of(b1) == std::vector<int>{2});
}

TEST_CASE("resolve lambda") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(4, 2);
    Eigen::VectorXd eps(4);
    eps << 1, -3, 0, 0;
    CHECK(resolve_lambda(EmpiricalOracle{eps, 2.0}, X) == doctest::Approx(1.5));
    CHECK(resolve_lambda(FixedLambda{0.3}, X) == 0.3);
    CHECK_THROWS(resolve_lambda(FixedLambda{0.0}, X));
}
