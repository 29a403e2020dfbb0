#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "amc/combinatorics.hpp"
#include "amc/rational.hpp"

#include <cmath>
#include <vector>

using namespace amc;

TEST_CASE("expected first-one position") {
    CHECK(expected_first_one_position(5, 1) == Rat(3));
    CHECK(expected_first_one_position(7, 7) == Rat(1));
    CHECK(expected_first_one_position(6, 2) == Rat(7, 3));
}

TEST_CASE("first-one mean matches brute force at (6,2)") {
    long long total = 0;
    int strings = 0;
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b) {
            total += a + 1;
            ++strings;
        }
    CHECK(strings == 15);
    CHECK(expected_first_one_position(6, 2) == Rat(total, strings));
}

TEST_CASE("first-one tail") {
    CHECK(first_one_tail(9, 4, 0) == Rat(1));
    CHECK(first_one_tail(6, 2, 2) == Rat(6, 15));
    CHECK(first_one_tail(6, 2, 5) == Rat(0));
    Rat markov = first_one_tail(12, 3, 8);
    CHECK(markov.to_double() < 0.5);
}

TEST_CASE("tau pmf basics") {
    CHECK(tau_pmf(3, 10, 1, 1) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(tau_pmf_exact(3, 10, 1, 1) == Rat(3, 10));
    for (long long N = 2; N < 20; ++N) {
        double f = tau_pmf(2, 9, 2, N);
        CHECK(f == doctest::Approx(tau_pmf_exact(2, 9, 2, N).to_double()).epsilon(1e-10));
    }
}

TEST_CASE("tau ratio identity is exact") {
    int k = 3, m = 20, r = 4;
    for (long long N = r; N < 10000; ++N) {
        Rat expect = rat_binomial(static_cast<int>(N), r - 1) /
                     rat_binomial(static_cast<int>(N) - 1, r - 1) * Rat(m - k, m);
        CHECK(tau_ratio(k, m, r, N) == expect);
    }
}

TEST_CASE("tau sums to one") {
    int k = 3, m = 30, r = 4;
    double sum = 0.0;
    long long N = r;
    for (; N <= 6000; ++N) sum += tau_pmf(k, m, r, N);
    sum += tau_tail(k, m, r, N - 1);
    CHECK(std::abs(sum - 1.0) <= 1e-10);
}

TEST_CASE("tau ratio brackets after the decrease point") {
    int k = 3, m = 20, r = 4;
    long long start = static_cast<long long>((2.0 * m / k + 1.0) * r) + 1;
    for (long long N = start; N < start + 200; ++N) {
        double ratio = tau_ratio(k, m, r, N).to_double();
        CHECK(ratio > 1.0 - double(k) / m);
        CHECK(ratio < 1.0 - double(k) / (2.0 * m));
    }
}

TEST_CASE("tau pmf is eventually below 1/n") {
    int k = 3, m = 20, r = 2;
    for (int n = 1; n <= 60; ++n) {
        long long N = static_cast<long long>(std::ceil(2.0 * m / k * (r + 1))) + n;
        CHECK(tau_pmf(k, m, r, N) <= 1.0 / n + 1e-12);
    }
}

TEST_CASE("simulated first hit matches the closed form") {
    auto positions = monte_carlo_detection(20, 3, 100000, 11);
    double mean = 0.0;
    for (int p : positions) mean += p;
    mean /= static_cast<double>(positions.size());
    double expect = expected_first_one_position(20, 3).to_double();
    CHECK(std::abs(mean - expect) / expect <= 0.01);

    for (int a : {1, 2, 3, 4, 5}) {
        double tail = 0.0;
        for (int p : positions)
            if (p > a) tail += 1.0;
        tail /= static_cast<double>(positions.size());
        double expect_tail = first_one_tail(20, 3, a).to_double();
        double sigma =
            std::sqrt(expect_tail * (1.0 - expect_tail) / positions.size());
        CHECK(std::abs(tail - expect_tail) <= 3.0 * sigma + 1e-9);
    }

    auto all_ones = monte_carlo_detection(5, 5, 2000, 3);
    for (int p : all_ones) CHECK(p == 1);
}

TEST_CASE("recovery bound calculators") {
    int m = 40, n = 60, r = 4;
    int psi_u = m - r + 1, psi_v = n - r + 1;
    double eps = 0.1;

    double base = double(m + n - r) * r;
    double b1 = 2.0 * m * n / psi_u * std::log(r / eps);
    double b2 = 2.0 * m / psi_u * (r + 2 + std::log(1.0 / eps)) / psi_v * n;
    CHECK(err_bound(m, n, r, psi_u, psi_v, eps) ==
          doctest::Approx(base + std::min(b1, b2)).epsilon(1e-12));

    double tight_eps = std::pow(2.0, -r);
    CHECK(err_bound(m, n, r, psi_u, psi_v, tight_eps) <= 2.0 * base);

    auto [count, failure] = erre_bound(m, n, r, psi_u, psi_v, eps, 3);
    CHECK(count == doctest::Approx(err_bound(m, n, r, psi_u, psi_v, eps) + 3.0 * n));
    CHECK(failure == doctest::Approx(eps + std::exp(-3.0 * double(psi_u) * psi_v / m)));
}

TEST_CASE("delayed-stop failure budget stays below twice eps") {
    double eps = 0.1;
    int T = static_cast<int>(std::ceil(std::log(1.0 / eps)));
    int m = 20, n = 30, r = 3;
    int psi_u = 18, psi_v = 28;
    REQUIRE(psi_u * psi_v >= m);
    auto [count, failure] = erre_bound(m, n, r, psi_u, psi_v, eps, T);
    CHECK(failure <= 2.0 * eps + 1e-12);
    CHECK(count > 0.0);
}

TEST_CASE("per-column sample size formula") {
    int m = 30, r = 3;
    double eps = 0.1;
    int psi_u = 10;
    double first = 2.0 * m / psi_u * std::log(r / eps);
    CHECK(erei_sample_size(m, r, psi_u, 1, eps) == doctest::Approx(first).epsilon(1e-12));

    CHECK(erei_sample_size(m, r, psi_u, m, eps) <= first + 1e-12);
    CHECK(erei_sample_size(m, r, psi_u, 1, 0.01) >=
          erei_sample_size(m, r, psi_u, 1, 0.1) - 1e-12);
}

TEST_CASE("noisy-column sample size switches branches on xi") {
    int m = 50, r = 5;
    int psi_u = 46, psi_v = 196;
    double eps = 0.1;
    double b1 = 2.0 * m / psi_u * std::log(r / eps);
    double b2 = 4.0 * m / psi_u * (r + 2 + std::log(1.0 / eps)) / psi_v;
    CHECK(eerei_sample_size(m, r, psi_u, psi_v, 5, eps) ==
          doctest::Approx(std::min(b1, b2)).epsilon(1e-12));
    CHECK(eerei_sample_size(m, r, psi_u, psi_v, psi_v, eps) ==
          doctest::Approx(b1).epsilon(1e-12));
}

TEST_CASE("initial bounded-noise sample size") {
    double mu = 2.0;
    int r = 3, m = 5000;
    double delta = 0.05;
    double expect = 72.0 * mu * r * std::pow(std::log(1.0 / delta), 2.0);
    CHECK(lrebn_d(mu, r, delta, 0.0, m) == static_cast<long long>(std::ceil(expect)));
    CHECK(lrebn_d(mu, r, delta, 10.0, 40) == 40);
    CHECK_THROWS(lrebn_d(0.5, r, delta, 0.0, m));
    CHECK_THROWS(lrebn_d(mu, r, 0.5, 0.0, m));
}
