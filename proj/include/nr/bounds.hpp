#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nr/bp.hpp"
#include "nr/dist.hpp"

namespace nr {

// Exact bound-side quantities for one (weights, walk-config) pair.
struct WalkDiagnostics {
    double nu_n;           // size-biased mean, sum w^2 / sum w
    double m2_star;        // size-biased second moment, sum w^3 / sum w
    double w_max;          // largest weight
    std::int64_t barrier;  // H
    std::int64_t horizon;  // H'
    std::int64_t window;   // k
    double boundary_coef;  // max(2 barrier^2, m2_star + 1 - nu_n)
};

WalkDiagnostics walk_diagnostics(const WeightSequence& ws, const WalkConfig& cfg);

// Upper bound on the expected stop time of the walk. The bracket term can be
// non-positive, in which case the inequality carries no information and
// nullopt ("vacuous") is returned.
std::optional<double> expected_stop_upper(const WalkDiagnostics& d);

// P(|C(V_n)| > k) <= (1 - (1 - nu_n) E[stop]) / barrier + E[stop] / window.
// Accepts either the analytic bound above or an empirical estimate of the
// expected stop time. May exceed 1 (vacuous but well defined).
double cluster_tail_upper(const WalkDiagnostics& d, double expected_stop);

// Leading constant of the largest-component tail bound for tau > 4:
// P(|C_max| > omega n^{2/3}) <= 2 omega^{-3/2} max(EW/EW3, 1) up to a
// 1 + O(omega^{-1/2} n^{-e}) factor whose exponent e is reported alongside.
struct TailBound {
    double value;
    double correction_exponent;  // (tau - 4) / (3 (tau - 1))
};

TailBound cmax_tail_leading_bound(const MomentSet& ms, double tau, double omega);

// Integer event threshold ceil(omega n^{(tau-2)/(tau-1)}) for the
// largest-component tail in the heavy-tail regime tau in (3,4).
std::uint64_t cmax_tail_threshold(std::uint64_t n, double tau, double omega);

// The scaling-window exponent: 2/3 for tau > 4, (tau-2)/(tau-1) otherwise.
double cmax_window_exponent(double tau);

// Limiting degree probabilities p_k = E[e^{-W} W^k / k!] for k = 0..k_max,
// by adaptive quadrature against the weight law (exact sums for tables).
std::vector<double> degree_pmf(const Distribution& dist, std::size_t k_max);

// Proof-guided defaults: barrier = floor(omega^{1/2} n^{1/3}) for tau > 4,
// floor(delta n^{1/(tau-1)}) for tau <= 4; horizon = 100 barrier^2.
WalkConfig default_walk_config(double tau, std::uint64_t n, std::int64_t window,
                               double omega = 2.0, double delta = 0.1);

// One row of the exported bound table
struct BoundRow {
    std::uint64_t n;
    double tau;
    double omega;
    std::int64_t barrier;
    std::int64_t horizon;
    std::uint64_t k;
    double bound;
    std::string source;
};

void write_bound_csv(std::ostream& os, const std::vector<BoundRow>& rows);

}  // namespace nr
