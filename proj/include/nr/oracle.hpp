#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "nr/dist.hpp"
#include "nr/graph.hpp"

namespace nr {

// A finite exact law on integer support; probs sum to 1 within 1e-12.
struct ExactLaw {
    std::vector<std::uint64_t> support;
    std::vector<double> probs;

    double prob_of(std::uint64_t value) const;
    // P(X > k)
    double tail_above(std::uint64_t k) const;
};

struct ComponentLaws {
    ExactLaw c_max;           // law of the largest component size
    ExactLaw random_cluster;  // law of |C(V)| for V uniform on [n]
};

// Pair index of {i, j} (i < j, 0-based) in the lexicographic pair order
// used for graph bitmasks.
std::size_t pair_index(std::uint64_t n, std::uint32_t i, std::uint32_t j);

// Bitmask of a sampled graph in the same order (requires C(n,2) <= 63).
std::uint64_t graph_mask(const GraphSample& g);

// Exact product-law probability of every edge subset, indexed by bitmask.
// Probabilities are accumulated in log space so tiny p_ij do not underflow.
// Refuses n > 6.
std::vector<double> exact_graph_law(const WeightSequence& ws);

// Exact laws of |C_max| and |C(V_n)| by summing the product law over all
// edge subsets. Refuses n > 6.
ComponentLaws exact_component_laws(const WeightSequence& ws);

// Closed-form matrix p_ij = 1 - exp(-w_i w_j / l_n). Refuses n > 6 (meant
// for validating sampler marginals at oracle scale).
std::vector<std::vector<double>> exact_edge_marginals(const WeightSequence& ws);

// CSV export (value,prob).
void write_law_csv(std::ostream& os, const ExactLaw& law);

}  // namespace nr
