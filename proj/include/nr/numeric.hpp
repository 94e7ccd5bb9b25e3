#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace nr {

// Neumaier-compensated accumulator. Used for the cached weight sums so they
// stay within a few ulps of the exact value even for n = 10^6 terms.
class CompensatedSum {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Pairwise (tree) summation in fixed order. Gives the same result for the
// same input regardless of how the values were produced, which keeps
// multi-worker reductions byte-identical.
double pairwise_sum(std::span<const double> xs);

// Number of representable doubles between a and b (saturates at 2^62).
std::uint64_t ulp_distance(double a, double b);

// Adaptive Simpson quadrature with relative tolerance. `f` must be finite
// on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth = 60);

// Poisson pmf and upper tail P(Y >= k) for Y ~ Poisson(lambda), evaluated
// in log space so large means are safe.
double poisson_pmf(double lambda, std::uint64_t k);
double poisson_tail(double lambda, std::uint64_t k);

inline double sq(double x) { return x * x; }

}  // namespace nr
