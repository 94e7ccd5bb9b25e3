#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nr/numeric.hpp"
#include "nr/rng.hpp"

using namespace nr;

TEST_CASE("streams are deterministic and independent of construction order") {
    RngStream a(42, 7);
    RngStream b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    RngStream c(42, 8);
    RngStream d(43, 7);
    CHECK(RngStream(42, 7).next_u64() != c.next_u64());
    CHECK(RngStream(42, 7).next_u64() != d.next_u64());
}

TEST_CASE("unit draws are in range and roughly uniform") {
    RngStream rng(1, 0);
    double sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = rng.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    // mean 1/2 (sd of the mean ~ 0.00065), second moment 1/3
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
    CHECK(sum2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
    CHECK(RngStream(1, 1).next_unit_pos() > 0.0);
}

TEST_CASE("next_below covers the range without bias") {
    RngStream rng(3, 0);
    std::vector<int> counts(10, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[rng.next_below(10)];
    for (int c : counts) {
        // 4 sigma of binomial(1e5, 0.1)
        CHECK(std::abs(c - n / 10) < 4.0 * std::sqrt(n * 0.1 * 0.9) + 1);
    }
}

TEST_CASE("poisson sampler matches exact pmf across the small/large split") {
    // chi-square-ish check: every bin with expected count >= 20 within 5 sigma
    for (double lambda : {0.5, 3.0, 9.9, 10.1, 30.0, 600.0}) {
        RngStream rng(17, static_cast<std::uint64_t>(lambda * 100));
        const int n = 200000;
        double mean = 0.0, m2 = 0.0;
        std::vector<std::uint64_t> counts(2048, 0);
        for (int i = 0; i < n; ++i) {
            std::uint64_t k = rng.next_poisson(lambda);
            REQUIRE(k < counts.size());
            ++counts[k];
            mean += static_cast<double>(k);
            m2 += static_cast<double>(k) * static_cast<double>(k);
        }
        mean /= n;
        m2 /= n;
        double var = m2 - mean * mean;
        // mean and variance both equal lambda
        CHECK(mean == doctest::Approx(lambda).epsilon(0.02));
        CHECK(var == doctest::Approx(lambda).epsilon(0.05));
        for (std::size_t k = 0; k < counts.size(); ++k) {
            double expect = poisson_pmf(lambda, k) * n;
            if (expect < 20.0) continue;
            double sd = std::sqrt(expect);
            CHECK(std::abs(static_cast<double>(counts[k]) - expect) < 5.0 * sd);
        }
    }
}

TEST_CASE("poisson edge cases") {
    RngStream rng(5, 0);
    CHECK(rng.next_poisson(0.0) == 0);
    CHECK_THROWS_AS(rng.next_poisson(-1.0), std::domain_error);
}

TEST_CASE("alias table reproduces exact probabilities") {
    std::vector<double> w = {2.0, 1.0, 1.0};
    AliasTable t(w);
    CHECK(t.probability(0) == doctest::Approx(0.5));
    CHECK(t.probability(1) == doctest::Approx(0.25));
    CHECK(t.probability(2) == doctest::Approx(0.25));

    RngStream rng(9, 0);
    std::vector<int> counts(3, 0);
    const int n = 400000;
    for (int i = 0; i < n; ++i) ++counts[t.sample(rng)];
    for (std::size_t i = 0; i < 3; ++i) {
        double p = t.probability(i);
        double sd = std::sqrt(n * p * (1 - p));
        CHECK(std::abs(counts[i] - n * p) < 4.0 * sd);
    }
}

TEST_CASE("alias table rejects degenerate input") {
    auto make = [](const std::vector<double>& v) { return AliasTable(v); };
    CHECK_THROWS_AS(make({0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(make({1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("alias table with a zero-weight entry never samples it") {
    std::vector<double> w = {1.0, 0.0, 3.0};
    AliasTable t(w);
    RngStream rng(11, 0);
    for (int i = 0; i < 20000; ++i) CHECK(t.sample(rng) != 1);
}
