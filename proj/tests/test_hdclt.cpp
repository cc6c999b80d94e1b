#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "subweibull/covariance.hpp"
#include "subweibull/hdclt.hpp"
#include "subweibull/stats.hpp"

using namespace subweibull;

TEST_CASE("max statistic") {
    Eigen::MatrixXd w(1, 2);
    w << 3, -1;
    CHECK(max_statistic(w) == 3.0);
    CHECK(max_statistic(Eigen::MatrixXd::Zero(5, 4)) == 0.0);
    Eigen::MatrixXd W = Eigen::MatrixXd::Random(9, 4);
    Eigen::MatrixXd P(9, 4);
    P << W.col(2), W.col(0), W.col(3), W.col(1);
    CHECK(max_statistic(W) == max_statistic(P));
    CHECK(max_statistic(W) == doctest::Approx(W.colwise().sum().maxCoeff() / 3.0).epsilon(1e-14));
}

TEST_CASE("gaussian analog sample") {
    const auto zero = gaussian_analog_sample(Eigen::MatrixXd::Zero(3, 3), 10, 100, RngStream(50, 0));
    CHECK(std::all_of(zero.values.begin(), zero.values.end(), [](double v) { return v == 0.0; }));
    CHECK(zero.source == MaxStatSource::GaussianAnalog);
    const long reps = 100000;
    const auto one = gaussian_analog_sample(Eigen::MatrixXd::Ones(1, 1), 10, reps, RngStream(50, 1));
    const double mean = std::accumulate(one.values.begin(), one.values.end(), 0.0) / reps;
    CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(reps)));
    const auto two = gaussian_analog_sample(Eigen::MatrixXd::Ones(2, 2), 10, reps, RngStream(50, 2));
    CHECK(ks_distance(one.values, two.values) < 0.02);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
    bad(0, 0) = -1;
    CHECK_THROWS(gaussian_analog_sample(bad, 10, 10, RngStream(50, 3)));
}

TEST_CASE("rho rectangle proxy") {
    MaxStatSample a{{1, 2, 3, 4}, 1, 1, MaxStatSource::Data};
    CHECK(rho_rectangle_proxy(a, a, 0) == 0.0);
    MaxStatSample b{{10, 11, 12}, 1, 1, MaxStatSource::Data};
    CHECK(rho_rectangle_proxy(a, b, 0) == doctest::Approx(1.0));
    CHECK(rho_rectangle_proxy(a, b, 10) == doctest::Approx(1.0));
    const auto x = gaussian_analog_sample(Eigen::MatrixXd::Identity(3, 3), 1, 100000, RngStream(51, 0));
    const auto y = gaussian_analog_sample(Eigen::MatrixXd::Identity(3, 3), 1, 100000, RngStream(51, 1));
    const double dkw = 2.0 * std::sqrt(std::log(2.0 / 0.001) / (2.0 * 1e5));
    CHECK(rho_rectangle_proxy(x, y, 0) < dkw);
    CHECK(rho_rectangle_proxy(x, y, 0) < 0.015);
}

TEST_CASE("hdclt bound") {
    BoundConstants c;
    const double e = std::exp(1.0);
    // with K tiny the second term vanishes, leaving the unit first term
    CHECK(hdclt_bound(1, 1e-6, 1, e, 1, 1, c).bound == doctest::Approx(1.0).epsilon(1e-12));
    double prev = INFINITY;
    for (double n = 10; n <= 1e8; n *= 10) {
        const double b = hdclt_bound(1, 1, n, 50, 1, 1, c).bound;
        CHECK(b < prev);
        prev = b;
    }
    const double t2 = hdclt_bound(1, 1, 100, 50, 1, 1, c).bound - hdclt_bound(1e-12, 1, 100, 50, 1, 1, c).bound;
    const double first = hdclt_bound(1, 1e-9, 100, 50, 1, 1, c).bound;
    const double base2 = hdclt_bound(1, 1, 100, 50, 1, 1, c).bound - first;
    const double dbl2 = hdclt_bound(1, 2, 100, 50, 1, 1, c).bound - first;
    CHECK(dbl2 == doctest::Approx(64 * base2));
    CHECK(t2 > 0);
    CHECK(hdclt_bound(1, 1, 100, 100, 1, 1, c).bound > hdclt_bound(1, 1, 100, 50, 1, 1, c).bound);
    CHECK(hdclt_bound(2, 1, 100, 50, 1, 1, c).bound > hdclt_bound(1, 1, 100, 50, 1, 1, c).bound);
    CHECK(hdclt_bound(1, 1, 100, 1, 1, 1, c).condition_ok);
    CHECK_FALSE(hdclt_bound(1, 1, 100, 50, 1, 1, c).condition_ok);
    CHECK(hdclt_bound(1, 1, 1e12, 50, 1, 1, c).condition_ok);
}

TEST_CASE("multiplier bootstrap") {
    Eigen::MatrixXd same(20, 3);
    same.rowwise() = Eigen::RowVector3d(1, -2, 5);
    const auto z = multiplier_bootstrap(same, 200, {0.5, 0.9}, RngStream(52, 0));
    CHECK(std::all_of(z.values.begin(), z.values.end(), [](double v) { return v == 0.0; }));
    CHECK(z.quantiles.at(0.5) == 0.0);
    CHECK(z.quantiles.at(0.9) == 0.0);
    CHECK_FALSE(z.delta_star.has_value());

    RngStream r(52, 1);
    Eigen::MatrixXd col(300, 1);
    for (Eigen::Index i = 0; i < 300; ++i) col(i, 0) = 2.0 * r.normal() + 1.0;
    const auto b = multiplier_bootstrap(col, 100000, {0.975}, RngStream(52, 2));
    const double sd = std::sqrt(centered_cov(col)(0, 0));
    CHECK(b.quantiles.at(0.975) == doctest::Approx(1.96 * sd).epsilon(0.03));

    Eigen::MatrixXd W = Eigen::MatrixXd::Random(50, 4);
    const auto b1 = multiplier_bootstrap(W, 500, {0.1, 0.5, 0.9}, RngStream(52, 3));
    const auto b3 = multiplier_bootstrap(-3.0 * W, 500, {0.1, 0.5, 0.9}, RngStream(52, 3));
    const auto b4 = multiplier_bootstrap(3.0 * W, 500, {0.1, 0.5, 0.9}, RngStream(52, 3));
    double prev = -INFINITY;
    for (const auto& [lvl, v] : b1.quantiles) {
        CHECK(v >= prev);
        prev = v;
        CHECK(b4.quantiles.at(lvl) == doctest::Approx(3.0 * v));
    }
    // -W flips the multiplier sign, an equal-in-law transformation
    CHECK(b3.draws == 500);
    const Eigen::MatrixXd ref = Eigen::MatrixXd::Identity(4, 4);
    const auto bd = multiplier_bootstrap(W, 10, {0.5}, RngStream(52, 4), &ref);
    REQUIRE(bd.delta_star.has_value());
    CHECK(*bd.delta_star == doctest::Approx(max_elementwise_error(centered_cov(W), ref)));
    CHECK_THROWS(multiplier_bootstrap(W.topRows(1), 10, {0.5}, RngStream(52, 5)));
}

TEST_CASE("bootstrap matches the gaussian analog of its own covariance") {
    RngStream r(53, 0);
    Eigen::MatrixXd W(200, 3);
    for (Eigen::Index i = 0; i < W.size(); ++i) W.data()[i] = r.exponential();
    const auto b = multiplier_bootstrap(W, 100000, {0.5}, RngStream(53, 1));
    const auto g = gaussian_analog_sample(b.sigma_star, 200, 100000, RngStream(53, 2));
    CHECK(ks_distance(b.values, g.values) < 0.02);
}

TEST_CASE("bootstrap error bound") {
    const double e = std::exp(1.0);
    CHECK(bootstrap_error_bound(0, 10, 1) == 0.0);
    CHECK(bootstrap_error_bound(1, e, 1) == doctest::Approx(1.0));
    CHECK(bootstrap_error_bound(0.8, 50, 1) == doctest::Approx(2.0 * bootstrap_error_bound(0.1, 50, 1)));
    CHECK_THROWS(bootstrap_error_bound(1, 1.5, 1));
}

TEST_CASE("coverage experiments") {
    const auto c = coverage_experiment(VectorLaw::iid(ScalarLaw::constant(0.0), 3), 20, 3, 0.9, 100, 50,
                                       RngStream(54, 0));
    CHECK(c.coverage == 1.0);
    CHECK_THROWS(coverage_experiment(VectorLaw::iid(ScalarLaw::gaussian(), 1), 20, 1, 0.9, 50, 50, RngStream(54, 1)));

    const auto law = VectorLaw::iid(ScalarLaw::gaussian(), 1);
    const auto g = coverage_experiment(law, 500, 1, 0.9, 1000, 500, RngStream(54, 2));
    CHECK(std::fabs(g.coverage - 0.9) <= 4.0 * g.mc_se);
    CHECK(g.statistics.size() == 1000);

    for (int run = 0; run < 3; ++run) {
        const auto lo = coverage_experiment(law, 100, 1, 0.5, 100, 200, RngStream(55, run));
        const auto hi = coverage_experiment(law, 100, 1, 0.9, 100, 200, RngStream(55, run));
        CHECK(hi.coverage >= lo.coverage);
    }
}
