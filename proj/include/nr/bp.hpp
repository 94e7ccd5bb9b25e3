#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "nr/dist.hpp"
#include "nr/rng.hpp"

namespace nr {

// One offspring draw of the dominating process: a mark M with
// P(M = m) = w_m / sum(w), then Poisson(w_M).
std::uint64_t sample_offspring(const WeightSequence& ws, const MarkSampler& marks,
                               RngStream& rng);

struct BpStep {
    std::uint64_t offspring;  // all children of the explored mark
    std::uint64_t fresh;      // children whose marks were never seen before
};

struct BpTrace {
    std::uint32_t initial_mark = 0;      // 0-based
    std::vector<BpStep> steps;           // retained only when requested
    std::uint64_t stop_time = 0;         // first time the active set empties
    bool censored = false;               // hit the step cap before stopping
    std::uint64_t explored = 0;          // marks explored (= stop_time if not censored)
};

// Marked mixed-Poisson branching exploration with thinning. The initial
// mark is uniform on [n] and its offspring count is Poisson(w_{J0}); every
// later explored mark draws a size-biased offspring count. Children whose
// marks were already seen are dropped. Runs until the active mark set
// empties or `cap` marks have been explored.
BpTrace run_marked_bp(const WeightSequence& ws, const MarkSampler& marks,
                      RngStream& rng, std::uint64_t cap,
                      bool record_steps = false);

// Stopped-walk parameters: the walk S_t = 1 + sum(offspring_i - 1) stops the
// first time t < horizon with S_t = 0 or S_t >= barrier; if no such time
// exists the stop time is the horizon itself (with the walk extended to it).
// `window` is the positivity-check length; horizon >= window is required.
struct WalkConfig {
    std::int64_t barrier;  // upper absorbing level
    std::int64_t horizon;  // hard stopping time
    std::int64_t window;   // number of steps checked for S_t > 0

    void validate() const;
};

struct WalkPath {
    std::vector<std::uint64_t> offspring;  // draws, offspring[i] is step i+1
    std::vector<std::int64_t> values;      // values[0] = 1, one entry per step taken
    std::int64_t stop_time = 0;
    std::int64_t stop_value = 0;
    bool positive_in_window = false;  // S_t > 0 for all 0 <= t <= window
};

// Walk with caller-supplied offspring draws (used by the point-mass stubs
// in tests as well as by the two production variants below).
WalkPath run_walk(const WalkConfig& cfg, const std::function<std::uint64_t()>& draw,
                  bool record_path = true);

// i.i.d. size-biased walk; when dominate_first_step is false the first draw
// uses a uniform mark instead (the pre-domination hybrid, whose positivity
// sits between the thinned process and the i.i.d. walk).
WalkPath run_walk(const WeightSequence& ws, const MarkSampler& marks,
                  const WalkConfig& cfg, RngStream& rng,
                  bool dominate_first_step = true, bool record_path = true);

// Empirical conditional overshoot tail P(S_gamma - barrier >= k | S_gamma >=
// barrier) over R runs, paired with the Poisson(w_1) tail that dominates it.
struct OvershootTable {
    std::uint64_t runs = 0;
    std::uint64_t conditioning_events = 0;
    std::vector<std::uint64_t> exceed_counts;  // index k = 0..k_max
    std::vector<double> poisson_tail_bound;    // P(Poi(w_1) >= k)

    double conditional_tail(std::size_t k) const {
        return conditioning_events == 0 ? 0.0
                                        : static_cast<double>(exceed_counts[k]) /
                                              static_cast<double>(conditioning_events);
    }
};

OvershootTable overshoot_conditional(const WeightSequence& ws, const MarkSampler& marks,
                                     const WalkConfig& cfg, RngStream& rng,
                                     std::uint64_t replicates, std::size_t k_max);

// Residual M_stop - M_0 of the quadratic martingale
//   M_t = S_t^2 + t (nu_n - 1 - m2*) - 2 (nu_n - 1) sum_{j<t} S_j
// along a recorded path; its mean over replicates is zero.
double martingale_residual(const WeightSequence& ws, const WalkPath& path);

// CSV debug exports (step,value).
void write_walk_csv(std::ostream& os, const WalkPath& path);
void write_bp_csv(std::ostream& os, const BpTrace& trace);

}  // namespace nr
