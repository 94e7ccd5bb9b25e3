#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "nr/graph.hpp"
#include "nr/rng.hpp"

namespace nr {

// One step of the three-status exploration. At every t the statuses
// partition [n]: active + unseen + explored = n, and unseen = n - active - t.
struct TraceStep {
    std::uint64_t t;
    std::uint64_t active;
    std::uint64_t unseen;
    std::uint64_t explored;
};

struct ExplorationTrace {
    std::uint32_t start_vertex = 0;  // 0-based
    std::vector<TraceStep> steps;    // retained only when requested
    std::uint64_t component_size = 0;
};

// Explores the component of v: at each step the smallest-label active vertex
// is explored and its unseen neighbours become active. Stops when the active
// set empties; component_size is then the number of explored vertices.
ExplorationTrace explore_cluster(const AdjacencyList& adj, std::uint32_t v,
                                 bool record_trace = false);
ExplorationTrace explore_cluster(const GraphSample& g, std::uint32_t v,
                                 bool record_trace = false);

struct ComponentSummary {
    std::vector<std::uint64_t> sizes;  // sorted descending, sums to n

    std::uint64_t c_max() const { return sizes.empty() ? 0 : sizes.front(); }
    // N_k: number of vertices lying in components of size strictly > k.
    std::uint64_t vertices_in_larger_than(std::uint64_t k) const;
};

// Union-find (union by size, path halving) summary of all components.
ComponentSummary components_union_find(const GraphSample& g);

// Largest component size straight from the edge list; the cheap path used
// by the tail-probability estimators.
std::uint64_t largest_component(const GraphSample& g);

// Full smallest-label sweep across all components (restarting from the
// smallest unseen label whenever the active set empties). Returns sizes in
// the order the components were exhausted; used to cross-check union-find.
std::vector<std::uint64_t> explore_all_components(const AdjacencyList& adj);

// |C(V)| for V uniform on [n].
std::uint64_t cluster_of_random_vertex(const GraphSample& g, RngStream& rng);
std::uint64_t cluster_of_random_vertex(const AdjacencyList& adj, RngStream& rng);

// CSV exports: components as (size,count), traces as (t,active,unseen,explored).
void write_component_csv(std::ostream& os, const ComponentSummary& cs);
void write_trace_csv(std::ostream& os, const ExplorationTrace& trace);

}  // namespace nr
