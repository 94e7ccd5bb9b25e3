#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nr/numeric.hpp"

using namespace nr;

TEST_CASE("compensated sum beats naive accumulation") {
    // 1 + 1e-16 added 10^6 times loses the small terms in naive order
    CompensatedSum acc;
    acc.add(1.0);
    for (int i = 0; i < 1000000; ++i) acc.add(1e-16);
    CHECK(acc.value() == doctest::Approx(1.0 + 1e-10).epsilon(1e-12));
}

TEST_CASE("pairwise sum is order-stable and exact on integers") {
    std::vector<double> xs(1000);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
    CHECK(pairwise_sum(xs) == 999.0 * 1000.0 / 2.0);
}

TEST_CASE("ulp distance") {
    CHECK(ulp_distance(1.0, 1.0) == 0);
    CHECK(ulp_distance(1.0, std::nextafter(1.0, 2.0)) == 1);
    CHECK(ulp_distance(-1.0, std::nextafter(-1.0, 0.0)) == 1);
    CHECK(ulp_distance(1.0, 2.0) > 1000);
}

TEST_CASE("adaptive simpson on smooth integrals") {
    CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-12) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(adaptive_simpson([](double x) { return std::exp(-x); }, 0.0, 40.0, 1e-12) ==
          doctest::Approx(1.0).epsilon(1e-9));
    // Pareto tail integral: int_1^inf 3 x^{-4} dx = 1
    CHECK(adaptive_simpson([](double x) { return 3.0 * std::pow(x, -4.0); }, 1.0, 1e6,
                           1e-12) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("poisson pmf sums to one and the tail matches the head") {
    for (double lambda : {0.3, 2.0, 9.9, 10.0, 47.5}) {
        double total = 0.0;
        for (std::uint64_t k = 0; k < 400; ++k) total += poisson_pmf(lambda, k);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        for (std::uint64_t k : {std::uint64_t(0), std::uint64_t(1), std::uint64_t(5)}) {
            double head = 0.0;
            for (std::uint64_t j = 0; j < k; ++j) head += poisson_pmf(lambda, j);
            CHECK(poisson_tail(lambda, k) == doctest::Approx(1.0 - head).epsilon(1e-10));
        }
    }
}

TEST_CASE("poisson deep tail by upward summation") {
    // P(Poi(2) >= 20) is tiny but positive
    double t = poisson_tail(2.0, 20);
    CHECK(t > 0.0);
    CHECK(t < 1e-12);
}
