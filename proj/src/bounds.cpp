#include "nr/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "nr/numeric.hpp"

namespace nr {

WalkDiagnostics walk_diagnostics(const WeightSequence& ws, const WalkConfig& cfg) {
    cfg.validate();
    WalkDiagnostics d;
    d.nu_n = ws.nu_n();
    d.m2_star = ws.m2_star();
    d.w_max = ws.max_weight();
    d.barrier = cfg.barrier;
    d.horizon = cfg.horizon;
    d.window = cfg.window;
    double hb = static_cast<double>(cfg.barrier);
    d.boundary_coef = std::max(2.0 * hb * hb, d.m2_star + 1.0 - d.nu_n);
    return d;
}

std::optional<double> expected_stop_upper(const WalkDiagnostics& d) {
    double h = static_cast<double>(d.barrier);
    double numer = h + 3.0 * d.w_max + d.w_max * d.w_max / h;
    double horizon_term = 2.0 * d.boundary_coef / (d.m2_star * static_cast<double>(d.horizon));
    double bracket;
    if (1.0 - d.nu_n > 0.0) {
        bracket = 1.0 - (1.0 - d.nu_n) / d.m2_star * h - horizon_term;
    } else {
        bracket = 1.0 - (d.nu_n - 1.0) / d.m2_star * (numer - 1.0) - horizon_term;
    }
    if (!(bracket > 0.0)) return std::nullopt;
    return numer / (d.m2_star * bracket);
}

double cluster_tail_upper(const WalkDiagnostics& d, double expected_stop) {
    if (!(expected_stop >= 1.0))
        throw std::domain_error("cluster_tail_upper: the stop time is >= 1 a.s.");
    return (1.0 - (1.0 - d.nu_n) * expected_stop) / static_cast<double>(d.barrier) +
           expected_stop / static_cast<double>(d.window);
}

TailBound cmax_tail_leading_bound(const MomentSet& ms, double tau, double omega) {
    if (!(tau > 4.0))
        throw std::domain_error("cmax_tail_leading_bound: requires tau > 4");
    if (!(omega > 1.0))
        throw std::domain_error("cmax_tail_leading_bound: requires omega > 1");
    if (!std::isfinite(ms.ew3) || !(ms.ew > 0.0))
        throw std::domain_error("cmax_tail_leading_bound: needs finite moments");
    TailBound b;
    b.value = 2.0 * std::pow(omega, -1.5) * std::max(ms.ew / ms.ew3, 1.0);
    b.correction_exponent = (tau - 4.0) / (3.0 * (tau - 1.0));
    return b;
}

std::uint64_t cmax_tail_threshold(std::uint64_t n, double tau, double omega) {
    if (!(tau > 3.0 && tau < 4.0))
        throw std::domain_error("cmax_tail_threshold: requires tau in (3,4)");
    if (!(omega > 1.0))
        throw std::domain_error("cmax_tail_threshold: requires omega > 1");
    double x = omega * std::pow(static_cast<double>(n), (tau - 2.0) / (tau - 1.0));
    return static_cast<std::uint64_t>(std::ceil(x));
}

double cmax_window_exponent(double tau) {
    if (!(tau > 3.0)) throw std::domain_error("cmax_window_exponent: requires tau > 3");
    return tau > 4.0 ? 2.0 / 3.0 : (tau - 2.0) / (tau - 1.0);
}

std::vector<double> degree_pmf(const Distribution& dist, std::size_t k_max) {
    std::vector<double> p(k_max + 1, 0.0);
    if (const auto* law = dist.pareto_law()) {
        double tau = law->tau;
        double x_m = dist.scale();
        double coef = (tau - 1.0) * law->c_f;  // density (tau-1) c_f x^{-tau} on [x_m, inf)
        for (std::size_t k = 0; k <= k_max; ++k) {
            double dk = static_cast<double>(k);
            double lgk = std::lgamma(dk + 1.0);
            auto f = [&](double x) {
                return std::exp(-x + dk * std::log(x) - lgk) * coef * std::pow(x, -tau);
            };
            // e^{-x} x^k mass is negligible beyond mean + wide margin
            double hi = x_m + 60.0 + 3.0 * dk + 10.0 * std::sqrt(dk + 1.0);
            p[k] = adaptive_simpson(f, x_m, hi, 1e-10);
        }
        return p;
    }
    // table: W = q(u) is a step function, so the mixing integral is an exact sum
    const QuantileTable& t = *dist.table_law();
    for (std::size_t k = 0; k <= k_max; ++k) {
        double dk = static_cast<double>(k);
        double lgk = std::lgamma(dk + 1.0);
        CompensatedSum acc;
        double prev = 0.0;
        for (std::size_t i = 0; i < t.u.size(); ++i) {
            double q = t.q[i];
            double du = t.u[i] - prev;
            prev = t.u[i];
            double val;
            if (q == 0.0)
                val = k == 0 ? 1.0 : 0.0;
            else
                val = std::exp(-q + dk * std::log(q) - lgk);
            acc.add(val * du);
        }
        p[k] = acc.value();
    }
    return p;
}

WalkConfig default_walk_config(double tau, std::uint64_t n, std::int64_t window,
                               double omega, double delta) {
    if (!(tau > 3.0)) throw std::domain_error("default_walk_config: requires tau > 3");
    double nd = static_cast<double>(n);
    double h = tau > 4.0 ? std::floor(std::sqrt(omega) * std::cbrt(nd))
                         : std::floor(delta * std::pow(nd, 1.0 / (tau - 1.0)));
    std::int64_t barrier = std::max<std::int64_t>(1, static_cast<std::int64_t>(h));
    std::int64_t horizon = std::max<std::int64_t>(100 * barrier * barrier, window);
    return WalkConfig{barrier, horizon, std::max<std::int64_t>(1, window)};
}

void write_bound_csv(std::ostream& os, const std::vector<BoundRow>& rows) {
    os << "n,tau,omega,H,Hprime,k,bound,source\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%lld,%lld,%llu,%.17g,%s\n",
                      static_cast<unsigned long long>(r.n), r.tau, r.omega,
                      static_cast<long long>(r.barrier), static_cast<long long>(r.horizon),
                      static_cast<unsigned long long>(r.k), r.bound, r.source.c_str());
        os << buf;
    }
}

}  // namespace nr
