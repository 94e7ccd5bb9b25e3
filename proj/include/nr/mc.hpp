#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "nr/bp.hpp"
#include "nr/dist.hpp"
#include "nr/graph.hpp"

namespace nr {

// ---- experiment quantities -------------------------------------------------

// P(|C_max| > omega n^e), e the scaling-window exponent of the weight law's tau.
struct CmaxTail {
    double omega;
};

// P(|C(V_n)| > k) for a uniformly random vertex.
struct ClusterTail {
    std::uint64_t k;
};

// P(S_t > 0 for all t <= window) for the dominating walk; the hybrid with a
// uniform first mark is selected by dominate_first_step = false.
struct WalkPositivity {
    WalkConfig cfg;
    bool dominate_first_step = true;
};

// Mean stop time of the barrier-stopped walk, checked against its analytic
// upper bound when that bound is non-vacuous.
struct StopTimeMean {
    WalkConfig cfg;
};

// Conditional overshoot tail at the barrier vs the Poisson(w_1) tail; the
// reported point is the k in [1, k_max] with the worst margin.
struct OvershootTail {
    WalkConfig cfg;
    std::size_t k_max = 10;
};

// Total-variation distance between the law of explored marks in the thinned
// branching exploration and the exact law of |C(V_n)| (oracle scale only).
struct BpCouplingTv {
    std::uint64_t cap = 0;  // 0 = default 10 n
    double threshold = 0.02;
};

// Total-variation distance between pooled empirical degree frequencies
// (k <= k_max, overflow lumped) and the limiting mixed-Poisson pmf.
struct DegreeTv {
    std::size_t k_max = 50;
    double threshold = 0.02;
};

// Total-variation distance between the empirical distribution over all edge
// subsets and the exact product law (oracle scale only).
struct GraphLawTv {
    SampleMethod method;
    double threshold = 0.02;
};

using Quantity = std::variant<CmaxTail, ClusterTail, WalkPositivity, StopTimeMean,
                              OvershootTail, BpCouplingTv, DegreeTv, GraphLawTv>;

struct Experiment {
    Distribution dist;
    std::uint64_t n;
    std::uint64_t replicates;
    Quantity quantity;
    std::uint64_t seed;
};

// ---- reports ----------------------------------------------------------------

enum class Verdict { BoundHolds, BoundViolated, Vacuous, Informational };

std::string verdict_name(Verdict v);

struct McReport {
    double estimate = 0.0;
    double stderr_ = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::optional<double> bound_value;
    Verdict verdict = Verdict::Informational;
    double runtime_s = 0.0;
    double censored_fraction = 0.0;
};

// Frequency estimate with a 95% CI; zero/full counts fall back to the
// one-sided rule-of-three bound.
McReport binomial_report(std::uint64_t count, std::uint64_t replicates);

// Validation used by run_experiment; exposed so configs can be checked in
// full before any compute starts. Throws config_error or resource_error.
void validate_experiment(const Experiment& e);

// Runs the experiment with `workers` threads (0 = hardware). Replicate r
// always consumes stream (seed, r), and reductions run in a fixed order, so
// the report is identical for any worker count. A statistically significant
// violation is re-run once at 4x replicates before the verdict is final.
McReport run_experiment(const Experiment& e, int workers = 0);

// BoundHolds iff lhs.estimate <= rhs_value + 3 * pooled standard error.
Verdict dominance_check(const McReport& lhs, double rhs_value, double rhs_stderr = 0.0);

// JSON form with fields exactly as McReport; the canonical form zeroes the
// wall-clock field so determinism digests compare meaningfully.
std::string report_json(const McReport& r);
std::string canonical_report_json(const McReport& r);
std::string report_csv_header();
std::string report_csv_row(const McReport& r);

// FNV-1a over a byte string (config hashing, report digests).
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace nr
