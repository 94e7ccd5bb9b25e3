#include "nr/bp.hpp"

#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "nr/numeric.hpp"

namespace nr {

std::uint64_t sample_offspring(const WeightSequence& ws, const MarkSampler& marks,
                               RngStream& rng) {
    std::uint32_t m = marks.sample(rng);
    return rng.next_poisson(ws.weight(m));
}

BpTrace run_marked_bp(const WeightSequence& ws, const MarkSampler& marks,
                      RngStream& rng, std::uint64_t cap, bool record_steps) {
    if (cap < 1) throw std::invalid_argument("run_marked_bp: cap must be >= 1");
    std::uint64_t n = ws.size();
    BpTrace trace;
    std::uint32_t j0 = static_cast<std::uint32_t>(rng.next_below(n));
    trace.initial_mark = j0;

    // collision detection against every mark seen so far, active or explored
    std::unordered_set<std::uint32_t> seen;
    std::set<std::uint32_t> active;  // ordered: the smallest active mark is explored next
    seen.insert(j0);
    active.insert(j0);

    std::uint64_t t = 0;
    while (!active.empty()) {
        if (t == cap) {
            trace.censored = true;
            break;
        }
        std::uint32_t mark = *active.begin();
        active.erase(active.begin());
        ++t;
        // the explored individual's offspring count is Poisson of its own
        // mark's weight; unconditionally that is mixed Poisson, since every
        // non-root mark is itself a size-biased draw
        std::uint64_t children = rng.next_poisson(ws.weight(mark));
        std::uint64_t fresh = 0;
        for (std::uint64_t c = 0; c < children; ++c) {
            std::uint32_t m = marks.sample(rng);
            if (seen.insert(m).second) {
                active.insert(m);
                ++fresh;
            }
        }
        if (record_steps) trace.steps.push_back({children, fresh});
    }
    trace.stop_time = t;
    trace.explored = t;
    return trace;
}

void WalkConfig::validate() const {
    if (barrier < 1) throw std::invalid_argument("WalkConfig: barrier must be >= 1");
    if (window < 1) throw std::invalid_argument("WalkConfig: window must be >= 1");
    if (horizon < window)
        throw std::invalid_argument("WalkConfig: horizon must be >= window");
}

WalkPath run_walk(const WalkConfig& cfg, const std::function<std::uint64_t()>& draw,
                  bool record_path) {
    cfg.validate();
    WalkPath path;
    if (record_path) path.values.push_back(1);

    std::int64_t s = 1;
    std::int64_t t = 0;
    bool stop_resolved = false;
    bool zero_seen = false;
    std::int64_t first_zero = 0;

    // run until both the stopped value and the positivity window are known
    while (!stop_resolved || (!zero_seen && t < cfg.window)) {
        ++t;
        std::uint64_t up = draw();
        s += static_cast<std::int64_t>(up) - 1;
        if (record_path) {
            path.offspring.push_back(up);
            path.values.push_back(s);
        }
        if (!stop_resolved) {
            if (t < cfg.horizon && (s == 0 || s >= cfg.barrier)) {
                path.stop_time = t;
                path.stop_value = s;
                stop_resolved = true;
            } else if (t == cfg.horizon) {
                path.stop_time = cfg.horizon;
                path.stop_value = s;
                stop_resolved = true;
            }
        }
        if (s == 0 && !zero_seen) {
            zero_seen = true;
            first_zero = t;
        }
    }
    path.positive_in_window = !(zero_seen && first_zero <= cfg.window);
    return path;
}

WalkPath run_walk(const WeightSequence& ws, const MarkSampler& marks,
                  const WalkConfig& cfg, RngStream& rng, bool dominate_first_step,
                  bool record_path) {
    bool first = true;
    std::uint64_t n = ws.size();
    auto draw = [&]() -> std::uint64_t {
        if (first && !dominate_first_step) {
            first = false;
            std::uint32_t j0 = static_cast<std::uint32_t>(rng.next_below(n));
            return rng.next_poisson(ws.weight(j0));
        }
        first = false;
        return sample_offspring(ws, marks, rng);
    };
    return run_walk(cfg, draw, record_path);
}

OvershootTable overshoot_conditional(const WeightSequence& ws, const MarkSampler& marks,
                                     const WalkConfig& cfg, RngStream& rng,
                                     std::uint64_t replicates, std::size_t k_max) {
    if (replicates < 1)
        throw std::invalid_argument("overshoot_conditional: need replicates >= 1");
    OvershootTable table;
    table.runs = replicates;
    table.exceed_counts.assign(k_max + 1, 0);
    table.poisson_tail_bound.resize(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k)
        table.poisson_tail_bound[k] = poisson_tail(ws.max_weight(), k);
    for (std::uint64_t r = 0; r < replicates; ++r) {
        WalkPath p = run_walk(ws, marks, cfg, rng, true, false);
        if (p.stop_value >= cfg.barrier) {
            ++table.conditioning_events;
            std::uint64_t over = static_cast<std::uint64_t>(p.stop_value - cfg.barrier);
            std::size_t top = std::min<std::uint64_t>(over, k_max);
            for (std::size_t k = 0; k <= top; ++k) ++table.exceed_counts[k];
        }
    }
    return table;
}

double martingale_residual(const WeightSequence& ws, const WalkPath& path) {
    if (path.values.empty() ||
        static_cast<std::int64_t>(path.values.size()) <= path.stop_time)
        throw std::invalid_argument("martingale_residual: path not recorded to its stop");
    double nu = ws.nu_n();
    double m2s = ws.m2_star();
    std::int64_t stop = path.stop_time;
    double s_stop = static_cast<double>(path.values[static_cast<std::size_t>(stop)]);
    CompensatedSum partial;  // sum_{j=0}^{stop-1} S_j
    for (std::int64_t j = 0; j < stop; ++j)
        partial.add(static_cast<double>(path.values[static_cast<std::size_t>(j)]));
    double m_stop = s_stop * s_stop + static_cast<double>(stop) * (nu - 1.0 - m2s) -
                    2.0 * (nu - 1.0) * partial.value();
    return m_stop - 1.0;  // M_0 = S_0^2 = 1
}

void write_walk_csv(std::ostream& os, const WalkPath& path) {
    os << "step,value\n";
    for (std::size_t t = 0; t < path.values.size(); ++t)
        os << t << ',' << path.values[t] << '\n';
}

void write_bp_csv(std::ostream& os, const BpTrace& trace) {
    os << "step,offspring,fresh\n";
    for (std::size_t t = 0; t < trace.steps.size(); ++t)
        os << (t + 1) << ',' << trace.steps[t].offspring << ',' << trace.steps[t].fresh
           << '\n';
}

}  // namespace nr
