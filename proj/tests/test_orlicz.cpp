#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "subweibull/constants.hpp"
#include "subweibull/orlicz.hpp"
#include "subweibull/rng.hpp"

using namespace subweibull;
constexpr double e = std::numbers::e;

TEST_CASE("closed-form constants") {
    CHECK(const_c(1.0) == doctest::Approx(std::sqrt(3.0)));
    CHECK(const_c(2.0) == doctest::Approx(1.0));
    CHECK(const_m(0.5) == doctest::Approx(2.0));
    CHECK(const_m(2.0) == doctest::Approx(1.0));
    CHECK(const_s(1.0) == doctest::Approx(1.0));
    CHECK(quasi_norm_q(0.5) == doctest::Approx(2.0 * e * 64.0));
    CHECK(quasi_norm_q(1.0) == 1.0);
    CHECK(moment_lower_c(0.5) == doctest::Approx(0.125));
    CHECK(moment_upper_c(1.0) == doctest::Approx(4.0 * e));
    CHECK(weighted_sum_c(1.0) == doctest::Approx(2.0 * (4.0 * e + 2.0 * std::log(2.0))));
    CHECK_THROWS_AS(const_c(0.0), std::invalid_argument);
}

TEST_CASE("bound constants registry") {
    BoundConstants c;
    CHECK(c.set("c_alpha_rip", 2.5));
    CHECK_FALSE(c.set("no_such_constant", 1.0));
    CHECK(c.as_map().at("c_alpha_rip") == 2.5);
    CHECK(c.to_string().find("c_alpha_rip=2.5;") != std::string::npos);
}

TEST_CASE("function evaluation examples") {
    CHECK(eval_function(OrliczSpec::psi(2.0), 1.0) == doctest::Approx(e - 1.0));
    CHECK(eval_function(OrliczSpec::psi(0.5), 4.0) == doctest::Approx(e * e - 1.0));
    CHECK(eval_function(OrliczSpec::gbo(1.0, 1.0), 2.0) == doctest::Approx(e - 1.0).epsilon(1e-10));
    CHECK(eval_inverse(OrliczSpec::gbo(2.0, 0.0), e - 1.0) == doctest::Approx(1.0));
    CHECK(eval_inverse(OrliczSpec::gbo(0.5, 2.0), std::exp(4.0) - 1.0) == doctest::Approx(34.0));
    CHECK(eval_inverse(OrliczSpec::multi({{0.5, 1.0}, {1.0, 1.0}}), e - 1.0) == doctest::Approx(2.0));
}

TEST_CASE("inverse consistency on a log grid") {
    const std::vector<OrliczSpec> specs = {OrliczSpec::psi(0.5), OrliczSpec::psi(1.0), OrliczSpec::psi(2.0),
                                           OrliczSpec::gbo(0.5, 1.0), OrliczSpec::gbo(1.0, 0.3),
                                           OrliczSpec::gbo(2.0, 2.0), OrliczSpec::multi({{0.5, 1.0}, {1.5, 0.5}})};
    for (const auto& s : specs)
        for (double lx = -6.0; lx <= 3.0; lx += 0.25) {
            const double x = std::pow(10.0, lx);
            const double t = eval_function(s, x);
            if (!std::isfinite(t) || t == 0.0) continue;
            CHECK(eval_inverse(s, t) == doctest::Approx(x).epsilon(1e-9));
        }
}

TEST_CASE("empirical norm examples") {
    const std::vector<double> ones(50, 1.0), zeros(3, 0.0);
    const auto a = empirical_norm(ones, OrliczSpec::psi(1.0));
    CHECK(a.value == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-6));
    const auto z = empirical_norm(zeros, OrliczSpec::psi(2.0));
    CHECK(z.value == 0.0);
    CHECK(z.degenerate);
}

TEST_CASE("empirical norm agrees with an independent bisection") {
    RngStream r(11, 0);
    for (double alpha : {0.5, 1.0, 2.0}) {
        std::vector<double> x(3000);
        for (auto& v : x) v = r.normal() * (1.0 + r.uniform());
        const double ref = oracle::psi_norm(x, alpha);
        const auto est = empirical_norm(x, OrliczSpec::psi(alpha));
        CHECK(est.value == doctest::Approx(ref).epsilon(2e-6));
        CHECK(std::fabs(est.value - ref) <= est.tolerance + 1e-12 * ref);
    }
}

TEST_CASE("homogeneity and quasi-norm") {
    RngStream r(12, 0);
    for (double alpha : {0.5, 1.0, 2.0}) {
        std::vector<double> x(500), y(500), s(500), cx(500);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = r.normal();
            y[i] = r.exponential();
            s[i] = x[i] + y[i];
            cx[i] = -3.0 * x[i];
        }
        const auto sp = OrliczSpec::psi(alpha);
        const auto nx = empirical_norm(x, sp), ny = empirical_norm(y, sp), ns = empirical_norm(s, sp);
        const auto nc = empirical_norm(cx, sp);
        CHECK(std::fabs(nc.value - 3.0 * nx.value) <= kNormTol * 4.0 * nc.value);
        CHECK(ns.value <= quasi_norm_q(alpha) * (nx.value + ny.value) + 3.0 * (ns.tolerance + nx.tolerance + ny.tolerance));
    }
}

TEST_CASE("gbo norm is nonincreasing in L and sandwiched by the phi form") {
    RngStream r(13, 0);
    std::vector<double> x(800);
    for (auto& v : x) v = r.exponential() * (r.coin() ? 1 : -1);
    for (double alpha : {0.5, 1.0, 2.0}) {
        double prev = INFINITY;
        for (double L : {0.0, 0.25, 1.0, 4.0}) {
            const auto g = empirical_norm(x, OrliczSpec::gbo(alpha, L));
            CHECK(g.value <= prev + 2.0 * g.tolerance);
            prev = g.value;
            if (L > 0.0) {
                const auto f = empirical_norm(x, OrliczSpec::gbo_phi(alpha, L));
                CHECK(g.value <= f.value + 2.0 * (g.tolerance + f.tolerance));
                CHECK(f.value <= 2.0 * g.value + 2.0 * (g.tolerance + f.tolerance));
            }
        }
    }
}

TEST_CASE("moment growth norm") {
    const std::vector<double> ones(20, 1.0), zeros(5, 0.0);
    CHECK(moment_growth_norm(ones, 1.0) == doctest::Approx(1.0));
    CHECK(moment_growth_norm(zeros, 0.7) == 0.0);
    // Gaussian absolute moments: (E|Z|^r)^{1/r} = (2^{r/2} Gamma((r+1)/2) / sqrt(pi))^{1/r}
    RngStream r(14, 0);
    std::vector<double> z(1000000);
    for (auto& v : z) v = r.normal();
    double ref = 0.0;
    for (double q = 1.0; q <= 50.0 + 1e-9; q += 0.5) {
        const double lm = (q / 2.0) * std::log(2.0) + std::lgamma((q + 1.0) / 2.0) - 0.5 * std::log(std::numbers::pi);
        ref = std::max(ref, std::exp(lm / q) / std::sqrt(q));
    }
    CHECK(moment_growth_norm(z, 2.0, 50.0, 0.5) == doctest::Approx(ref).epsilon(0.02));
}

TEST_CASE("tail and maximal thresholds") {
    auto t = gbo_tail_threshold(1.0, 1.0, 1.0, 4.0);
    CHECK(t.threshold == doctest::Approx(6.0));
    CHECK(t.prob_bound == doctest::Approx(2.0 * std::exp(-4.0)));
    CHECK(gbo_tail_threshold(1.0, 2.0, 0.0, std::log(2.0)).prob_bound == doctest::Approx(1.0));
    CHECK(gbo_tail_threshold(0.0, 1.5, 2.0, 3.0).threshold == 0.0);
    CHECK(maximal_threshold(1.0, 1.0, 1.0, e, 0.0).threshold == doctest::Approx(2.0));
    CHECK(maximal_threshold(3.0, 1.0, 2.0, 1.0, 0.0).threshold == 0.0);
    CHECK(maximal_threshold(2.0, 2.0, 0.0, std::exp(4.0), 0.0).threshold == doctest::Approx(4.0));
    CHECK(sharper_maximal_denominator(1.0, 1.0, 0.0, 1.0) == doctest::Approx(std::sqrt(2.0 * std::log(2.0))));
    CHECK(sharper_maximal_denominator(1.0, 1.0, 0.0, 0.0) == 0.0);
    CHECK(sharper_maximal_denominator(e - 1.0, 1.0, 1.0, 1.0) == doctest::Approx(2.0 * std::sqrt(2.0)));
}
