#pragma once

#include <cstdint>

#include "nr/dist.hpp"
#include "nr/graph.hpp"

namespace nr {

// Per-draw bookkeeping of the Poisson-collapse construction; the simple
// graph discards self-loop events and multi-edges, we count them here.
struct CollapseDiagnostics {
    std::uint64_t pair_events = 0;
    std::uint64_t self_loops = 0;
    std::uint64_t duplicates = 0;
};

// Reference sampler: one Bernoulli(1 - exp(-w_i w_j / l_n)) per pair.
// Quadratic, guarded at n <= 10^4 unless allow_large is set.
GraphSample sample_naive(const WeightSequence& ws, RngStream rng,
                         bool allow_large = false);

// Fast sampler: K ~ Poisson(l_n / 2) mark pairs drawn i.i.d. from the mark
// distribution, self-pairs dropped, duplicates collapsed. Per-pair edge
// multiplicity is Poisson(w_i w_j / l_n), so inclusion probabilities match
// the naive sampler exactly. Expected work O(n + l_n).
GraphSample sample_poisson_collapse(const WeightSequence& ws, const MarkSampler& marks,
                                    RngStream rng, CollapseDiagnostics* diag = nullptr);

// Convenience overload building its own mark sampler.
GraphSample sample_poisson_collapse(const WeightSequence& ws, RngStream rng,
                                    CollapseDiagnostics* diag = nullptr);

GraphSample sample_graph(SampleMethod method, const WeightSequence& ws, RngStream rng,
                         bool allow_large = false);

// Closed-form inclusion probability of pair {i, j} (0-based).
double edge_probability(const WeightSequence& ws, std::uint32_t i, std::uint32_t j);

}  // namespace nr
