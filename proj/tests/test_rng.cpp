#include <doctest.h>

#include <cmath>
#include <set>

#include "subweibull/rng.hpp"

using namespace subweibull;

TEST_CASE("philox4x64-10 known-answer vectors") {
    CHECK(philox4x64({0, 0, 0, 0}, {0, 0}) ==
          Philox4x64{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL, 0x7e68b68aec7ba23bULL});
    const std::uint64_t f = ~0ULL;
    CHECK(philox4x64({f, f, f, f}, {f, f}) ==
          Philox4x64{0x87b092c3013fe90bULL, 0x438c3c67be8d0224ULL, 0x9cc7d7c69cd777b6ULL, 0xa09caebf594f0ba0ULL});
    CHECK(philox4x64({0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL, 0x082efa98ec4e6c89ULL},
                     {0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL}) ==
          Philox4x64{0xa528f45403e61d95ULL, 0x38c72dbd566e9788ULL, 0xa5a1610e72fd18b5ULL, 0x57bd43b5e52b7fe6ULL});
}

TEST_CASE("streams are reproducible and children are distinct") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    std::set<std::uint64_t> firsts;
    const RngStream root(42, 7);
    for (std::uint64_t i = 0; i < 1000; ++i) firsts.insert(root.child(i).next_u64());
    CHECK(firsts.size() == 1000);
    CHECK(root.child(3).child(1).next_u64() != root.child(1).child(3).next_u64());
    CHECK(RngStream(1, 0).next_u64() != RngStream(1, 1).next_u64());
    CHECK(RngStream(1, 0).next_u64() != RngStream(2, 0).next_u64());
}

TEST_CASE("uniform and normal moments") {
    RngStream r(5, 0);
    const int N = 400000;
    double su = 0, sn = 0, sn2 = 0, mn = 1, mx = 0;
    for (int i = 0; i < N; ++i) {
        const double u = r.uniform_open();
        mn = std::min(mn, u), mx = std::max(mx, u);
        su += u;
        const double z = r.normal();
        sn += z, sn2 += z * z;
    }
    CHECK(mn > 0.0);
    CHECK(mx < 1.0);
    CHECK(std::fabs(su / N - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / N));
    CHECK(std::fabs(sn / N) < 4.0 / std::sqrt(N));
    CHECK(std::fabs(sn2 / N - 1.0) < 4.0 * std::sqrt(2.0 / N));
}

TEST_CASE("gamma draws match mean and variance") {
    for (double shape : {0.3, 1.0, 4.5}) {
        RngStream r(9, static_cast<std::uint64_t>(shape * 10));
        const int N = 200000;
        double s = 0, s2 = 0;
        for (int i = 0; i < N; ++i) {
            const double g = r.gamma(shape);
            s += g, s2 += g * g;
        }
        const double m = s / N, v = s2 / N - m * m;
        CHECK(std::fabs(m - shape) < 5.0 * std::sqrt(shape / N));
        CHECK(std::fabs(v - shape) < 0.05 * shape + 0.01);
    }
}

TEST_CASE("normal quantile and cdf") {
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
    for (double x : {-8.0, -3.0, -0.5, 0.2, 2.5, 4.0}) CHECK(normal_quantile(normal_cdf(x)) == doctest::Approx(x).epsilon(1e-9));
    // upper tail through the lower one: cdf(7) itself rounds to within 1e-16 of 1
    CHECK(-normal_quantile(normal_cdf(-7.0)) == doctest::Approx(7.0).epsilon(1e-9));
}
