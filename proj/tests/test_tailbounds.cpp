#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "subweibull/errors.hpp"
#include "subweibull/tailbounds.hpp"

using namespace subweibull;
constexpr double e = std::numbers::e;

TEST_CASE("weighted sum bound") {
    const std::vector<double> one{1.0};
    const auto r = weighted_sum_bound(one, one, 1.0);
    // 2e * max(sqrt2, 2) * (4e + 2 log 2), hand-evaluated
    CHECK(r.gbo_norm_bound == doctest::Approx(133.29825266580016).epsilon(1e-14));
    CHECK(r.gbo_norm_bound == doctest::Approx(2.0 * e * 2.0 * (4.0 * e + 2.0 * std::log(2.0))));
    const std::vector<double> zeros{0.0, 0.0};
    const auto z = weighted_sum_bound(zeros, std::vector<double>{1.0, 2.0}, 1.5);
    CHECK(z.gbo_norm_bound == 0.0);
    CHECK(z.degenerate);
    const std::vector<double> two{1.0, 1.0};
    const double l1 = weighted_sum_bound(one, one, 0.5).l_param, l2 = weighted_sum_bound(two, two, 0.5).l_param;
    CHECK(l2 / l1 == doctest::Approx(1.0 / std::sqrt(2.0)));
    // homogeneity in the norm
    const std::vector<double> three{3.0};
    CHECK(weighted_sum_bound(one, three, 2.0).gbo_norm_bound ==
          doctest::Approx(3.0 * weighted_sum_bound(one, one, 2.0).gbo_norm_bound));
}

TEST_CASE("variance sum bound") {
    BoundConstants c;
    const std::vector<double> one{1.0};
    CHECK(variance_sum_bound(one, 1.0, 0.5, c).gbo_norm_bound == doctest::Approx(13.316806913608666).epsilon(1e-14));
    CHECK(variance_sum_bound(one, 1.0, 0.5, c).gbo_norm_bound == doctest::Approx(2.0 * e * std::sqrt(6.0)));
    const auto z = variance_sum_bound(std::vector<double>{0.0, 0.0}, 1.0, 2.0, c);
    CHECK(z.degenerate);
    CHECK(z.gbo_norm_bound == 0.0);
    const std::vector<double> v{0.3, 1.2, 0.7}, v2{0.6, 2.4, 1.4};
    CHECK(variance_sum_bound(v2, 1.0, 1.5, c).gbo_norm_bound ==
          doctest::Approx(std::sqrt(2.0) * variance_sum_bound(v, 1.0, 1.5, c).gbo_norm_bound));
    // both branches coincide at alpha = 1 when their constants agree
    BoundConstants d;
    d.set("c_alpha_var_small", 1.7);
    d.set("k_alpha_lt", 1.0);
    d.set("c_alpha_var_large", 1.7);
    const auto small = variance_sum_bound(v, 2.0, 1.0, d);
    const auto large = variance_sum_bound(v, 2.0, 1.0 + 1e-12, d);
    CHECK(small.l_param == doctest::Approx(large.l_param).epsilon(1e-9));
    CHECK(small.source == SumBoundSource::VarianceSmallAlpha);
    CHECK(large.effective_alpha == 1.0);
}

TEST_CASE("max of averages threshold") {
    BoundConstants c;
    CHECK(max_average_threshold(0.0, 0.0, 50, 10, 1.0, 2.0, c).threshold == 0.0);
    const auto q1 = max_average_threshold(2.0, 3.0, 50, 1, 1.0, 0.0, c);
    CHECK(q1.threshold == 0.0);
    CHECK(q1.prob_bound == 1.0);
    CHECK(max_average_threshold(1.0, 0.0, 100, 100, 1.0, 0.0, c).threshold ==
          doctest::Approx(1.5021762184025431).epsilon(1e-14));
    CHECK(max_average_threshold(1.0, 0.0, 100, 100, 1.0, 0.0, c).threshold ==
          doctest::Approx(7.0 * std::sqrt(std::log(100.0) / 100.0)));
}

TEST_CASE("thresholds are monotone in t, K and Gamma") {
    BoundConstants c;
    for (double alpha : {0.5, 1.0, 2.0}) {
        double prev_thr = -1, prev_p = 2;
        for (double t = 0.0; t <= 10.0; t += 0.5) {
            const auto r = max_average_threshold(1.0, 2.0, 200, 20, alpha, t, c);
            CHECK(r.threshold >= prev_thr);
            CHECK(r.prob_bound <= prev_p);
            prev_thr = r.threshold, prev_p = r.prob_bound;
        }
        CHECK(max_average_threshold(1.0, 3.0, 200, 20, alpha, 2, c).threshold >=
              max_average_threshold(1.0, 2.0, 200, 20, alpha, 2, c).threshold);
        CHECK(max_average_threshold(2.0, 2.0, 200, 20, alpha, 2, c).threshold >=
              max_average_threshold(1.0, 2.0, 200, 20, alpha, 2, c).threshold);
    }
    const std::vector<double> ts{0.0, 1.0, 2.0, 5.0};
    const auto curve = make_tail_curve(ts, [&](double t) { return max_average_threshold(1, 1, 100, 10, 1, t, c); });
    CHECK(curve.thresholds.size() == 4);
    CHECK_THROWS_AS(make_tail_curve(ts, [](double t) { return ThresholdResult{5.0 - t, 0.1}; }), InvariantViolation);
}

TEST_CASE("product norm") {
    const std::vector<double> a22{2.0, 2.0}, n23{2.0, 3.0};
    CHECK(product_norm(n23, a22).beta == doctest::Approx(1.0));
    CHECK(product_norm(n23, a22).bound == doctest::Approx(6.0));
    const std::vector<double> one{1.7}, alpha{0.8};
    CHECK(product_norm(one, alpha).beta == doctest::Approx(0.8));
    CHECK(product_norm(one, alpha).bound == doctest::Approx(1.7));
}

TEST_CASE("kernel deviation threshold") {
    BoundConstants c;
    CHECK(kernel_deviation_threshold(1, 1, 1, 1, 100, 0.5, 1, 1.0, 0.0, c).threshold == 0.0);
    CHECK(kernel_deviation_threshold(1, 1, 0, 0, 100, 0.01, 1, 1.0, 1.0, c).threshold == doctest::Approx(7.0));
    const double a = kernel_deviation_threshold(1, 1, 0, 0, 100, 0.01, 1, 1.0, 1.0, c).threshold;
    const double b = kernel_deviation_threshold(1, 1, 0, 0, 400, 0.01, 1, 1.0, 1.0, c).threshold;
    CHECK(b == doctest::Approx(a / 2.0));
}

TEST_CASE("Bernstein reference curve") {
    CHECK(bernstein_subexp_tail(1.0, 1.0, 0.0) == 1.0);
    CHECK(bernstein_subexp_tail(1.0, 1.0, 0.5) == 1.0);
    CHECK(bernstein_subexp_tail(1.0, 0.1, 20.0) == doctest::Approx(2.0 * std::exp(-50.0)));
}
