#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

namespace nr {

enum class SampleMethod { Naive, PoissonCollapse };

// A sampled simple graph on [n] as a deduplicated, canonically sorted edge
// list (0-based internally, i < j per pair). Immutable once built.
struct GraphSample {
    std::uint64_t n = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    SampleMethod method = SampleMethod::Naive;
    std::uint64_t seed = 0;

    std::uint64_t edge_count() const { return edges.size(); }
};

// Degree -> vertex count; counts sum to n.
std::map<std::uint64_t, std::uint64_t> degree_histogram(const GraphSample& g);

// Plain degree array (length n).
std::vector<std::uint32_t> degree_array(const GraphSample& g);

// CSR adjacency built once per sample for repeated explorations.
class AdjacencyList {
  public:
    explicit AdjacencyList(const GraphSample& g);

    std::uint64_t size() const { return offsets_.size() - 1; }
    std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
        return {neighbors_.data() + offsets_[v],
                neighbors_.data() + offsets_[v + 1]};
    }

  private:
    std::vector<std::uint64_t> offsets_;
    std::vector<std::uint32_t> neighbors_;
};

// Stable 64-bit fingerprint of (n, edges) for regression and determinism
// checks.
std::uint64_t graph_fingerprint(const GraphSample& g);

// Edge-list CSV (columns: u,v), vertices 1-based.
void write_edges_csv(std::ostream& os, const GraphSample& g);
GraphSample read_edges_csv(std::istream& is);

// Compact binary: magic "NRG1", little-endian u64 n, u64 m, then m pairs of
// u32 (1-based endpoints, i < j).
void write_edges_binary(std::ostream& os, const GraphSample& g);
GraphSample read_edges_binary(std::istream& is);

}  // namespace nr
