#include "nr/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nr/errors.hpp"

namespace nr {

double edge_probability(const WeightSequence& ws, std::uint32_t i, std::uint32_t j) {
    if (i == j) return 0.0;
    return -std::expm1(-ws.weight(i) * ws.weight(j) / ws.total());
}

GraphSample sample_naive(const WeightSequence& ws, RngStream rng, bool allow_large) {
    std::uint64_t n = ws.size();
    if (n > 10000 && !allow_large)
        throw resource_error(
            "sample_naive: n > 10^4 is quadratic; use the Poisson-collapse sampler "
            "or pass the large-n override");
    GraphSample g;
    g.n = n;
    g.method = SampleMethod::Naive;
    double total = ws.total();
    for (std::uint32_t i = 0; i + 1 < n; ++i) {
        double wi = ws.weight(i);
        if (wi == 0.0) {
            // remaining weights are zero too (sorted); all pairs have p = 0,
            // but the rng contract still consumes one draw per pair
            for (std::uint32_t j = i + 1; j < n; ++j) rng.next_unit();
            continue;
        }
        for (std::uint32_t j = i + 1; j < n; ++j) {
            double p = -std::expm1(-wi * ws.weight(j) / total);
            if (rng.next_unit() < p) g.edges.emplace_back(i, j);
        }
    }
    return g;
}

GraphSample sample_poisson_collapse(const WeightSequence& ws, const MarkSampler& marks,
                                    RngStream rng, CollapseDiagnostics* diag) {
    GraphSample g;
    g.n = ws.size();
    g.method = SampleMethod::PoissonCollapse;
    std::uint64_t k = rng.next_poisson(ws.total() / 2.0);
    std::vector<std::uint64_t> keys;
    keys.reserve(k);
    std::uint64_t self_loops = 0;
    for (std::uint64_t e = 0; e < k; ++e) {
        std::uint32_t a = marks.sample(rng);
        std::uint32_t b = marks.sample(rng);
        if (a == b) {
            ++self_loops;
            continue;
        }
        std::uint32_t lo = std::min(a, b), hi = std::max(a, b);
        keys.push_back((std::uint64_t(lo) << 32) | hi);
    }
    std::sort(keys.begin(), keys.end());
    std::uint64_t dupes = 0;
    std::uint64_t prev = ~std::uint64_t(0);
    g.edges.reserve(keys.size());
    for (std::uint64_t key : keys) {
        if (key == prev) {
            ++dupes;
            continue;
        }
        prev = key;
        g.edges.emplace_back(static_cast<std::uint32_t>(key >> 32),
                             static_cast<std::uint32_t>(key & 0xffffffffu));
    }
    if (diag) {
        diag->pair_events = k;
        diag->self_loops = self_loops;
        diag->duplicates = dupes;
    }
    return g;
}

GraphSample sample_poisson_collapse(const WeightSequence& ws, RngStream rng,
                                    CollapseDiagnostics* diag) {
    MarkSampler marks(ws);
    return sample_poisson_collapse(ws, marks, rng, diag);
}

GraphSample sample_graph(SampleMethod method, const WeightSequence& ws, RngStream rng,
                         bool allow_large) {
    return method == SampleMethod::Naive
               ? sample_naive(ws, rng, allow_large)
               : sample_poisson_collapse(ws, rng);
}

}  // namespace nr
