#include "nr/numeric.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace nr {

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

std::uint64_t ulp_distance(double a, double b) {
    if (a == b) return 0;
    if (std::isnan(a) || std::isnan(b)) return std::uint64_t(1) << 62;
    auto ordered = [](double x) -> std::int64_t {
        std::int64_t i = std::bit_cast<std::int64_t>(x);
        return i < 0 ? std::numeric_limits<std::int64_t>::min() - i : i;
    };
    std::int64_t ia = ordered(a), ib = ordered(b);
    std::uint64_t d = ia > ib ? std::uint64_t(ia - ib) : std::uint64_t(ib - ia);
    return d > (std::uint64_t(1) << 62) ? (std::uint64_t(1) << 62) : d;
}

namespace {

double simpson(double a, double fa, double fb, double b, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, fa, fm, m, flm);
    double right = simpson(m, fm, fb, b, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth) {
    if (!(b > a)) return 0.0;
    // coarse composite pass over 64 panels: localizes narrow peaks and gives
    // the magnitude that anchors the absolute tolerance
    constexpr int kPanels = 64;
    double h = (b - a) / kPanels;
    std::vector<double> xs(kPanels + 1), fs(kPanels + 1);
    for (int i = 0; i <= kPanels; ++i) {
        xs[i] = i == kPanels ? b : a + i * h;
        fs[i] = f(xs[i]);
    }
    double coarse = 0.0;
    for (int i = 0; i < kPanels; ++i)
        coarse += simpson(xs[i], fs[i], fs[i + 1], xs[i + 1], f(0.5 * (xs[i] + xs[i + 1])));
    double scale = std::max(std::abs(coarse), 1e-300);

    double total = 0.0;
    double panel_tol = rel_tol * scale / kPanels;
    for (int i = 0; i < kPanels; ++i) {
        double m = 0.5 * (xs[i] + xs[i + 1]);
        double fm = f(m);
        double whole = simpson(xs[i], fs[i], fs[i + 1], xs[i + 1], fm);
        total += simpson_rec(f, xs[i], fs[i], xs[i + 1], fs[i + 1], m, fm, whole,
                             panel_tol, max_depth);
    }
    return total;
}

double poisson_pmf(double lambda, std::uint64_t k) {
    if (lambda < 0.0) throw std::domain_error("poisson_pmf: negative mean");
    if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
    double dk = static_cast<double>(k);
    return std::exp(dk * std::log(lambda) - lambda - std::lgamma(dk + 1.0));
}

double poisson_tail(double lambda, std::uint64_t k) {
    if (k == 0) return 1.0;
    if (lambda == 0.0) return 0.0;
    // P(Y >= k) = 1 - sum_{j < k} pmf(j); the head has at most ~k terms but we
    // sum the smaller side when k is deep in the upper tail.
    double mean = lambda;
    if (static_cast<double>(k) <= mean + 10.0 * std::sqrt(mean) + 10.0) {
        CompensatedSum head;
        for (std::uint64_t j = 0; j < k; ++j) head.add(poisson_pmf(lambda, j));
        double t = 1.0 - head.value();
        return t < 0.0 ? 0.0 : t;
    }
    // deep tail: sum pmf upward until negligible
    CompensatedSum tail;
    double term = poisson_pmf(lambda, k);
    std::uint64_t j = k;
    while (term > 0.0 && (j == k || term > 1e-18 * tail.value())) {
        tail.add(term);
        ++j;
        term *= lambda / static_cast<double>(j);
        if (j > k + 10000) break;
    }
    return tail.value();
}

}  // namespace nr
