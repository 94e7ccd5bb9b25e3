#include "nr/explore.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <set>
#include <stdexcept>

namespace nr {

namespace {

// Shared engine for single-cluster and full-sweep exploration. `restart`
// enables the rule that picks the smallest unseen label after a component
// exhausts.
struct Exploration {
    const AdjacencyList& adj;
    std::uint64_t n;
    std::vector<std::uint8_t> seen;    // active or explored
    std::set<std::uint32_t> active;    // ordered: smallest label first
    std::uint64_t explored = 0;
    std::uint64_t seen_count = 0;

    explicit Exploration(const AdjacencyList& a)
        : adj(a), n(a.size()), seen(a.size(), 0) {}

    void activate_start(std::uint32_t v) {
        active.insert(v);
        seen[v] = 1;
        ++seen_count;
    }

    // explores one vertex; returns the number of newly activated vertices
    std::uint64_t step(std::uint32_t m) {
        std::uint64_t fresh = 0;
        for (std::uint32_t u : adj.neighbors(m)) {
            if (!seen[u]) {
                seen[u] = 1;
                ++seen_count;
                active.insert(u);
                ++fresh;
            }
        }
        ++explored;
        // status conservation: active + explored = seen, unseen = n - seen
        assert(seen_count == active.size() + explored);
        assert(seen_count <= n);
        return fresh;
    }
};

}  // namespace

ExplorationTrace explore_cluster(const AdjacencyList& adj, std::uint32_t v,
                                 bool record_trace) {
    if (v >= adj.size()) throw std::out_of_range("explore_cluster: vertex out of range");
    Exploration ex(adj);
    ex.activate_start(v);
    ExplorationTrace trace;
    trace.start_vertex = v;
    std::uint64_t t = 0;
    while (!ex.active.empty()) {
        std::uint32_t m = *ex.active.begin();
        ex.active.erase(ex.active.begin());
        ++t;
        ex.step(m);
        if (record_trace) {
            std::uint64_t a = ex.active.size();
            trace.steps.push_back({t, a, ex.n - a - t, t});
        }
    }
    trace.component_size = t;
    return trace;
}

ExplorationTrace explore_cluster(const GraphSample& g, std::uint32_t v,
                                 bool record_trace) {
    AdjacencyList adj(g);
    return explore_cluster(adj, v, record_trace);
}

std::vector<std::uint64_t> explore_all_components(const AdjacencyList& adj) {
    std::uint64_t n = adj.size();
    Exploration ex(adj);
    std::vector<std::uint64_t> sizes;
    std::uint32_t next_unseen = 0;
    std::uint64_t current = 0;
    while (ex.explored < n) {
        std::uint32_t m;
        if (!ex.active.empty()) {
            m = *ex.active.begin();
            ex.active.erase(ex.active.begin());
        } else {
            // restart: smallest unseen label starts the next component
            if (current > 0) {
                sizes.push_back(current);
                current = 0;
            }
            while (ex.seen[next_unseen]) ++next_unseen;
            m = next_unseen;
            ex.seen[m] = 1;
            ++ex.seen_count;
        }
        ex.step(m);
        ++current;
    }
    if (current > 0) sizes.push_back(current);
    return sizes;
}

namespace {

// parent-or-size array: negative entries are root markers holding -size
struct UnionFind {
    std::vector<std::int64_t> a;

    explicit UnionFind(std::uint64_t n) : a(n, -1) {}

    std::uint32_t find(std::uint32_t x) {
        while (a[x] >= 0) {
            if (a[a[x]] >= 0) a[x] = static_cast<std::int64_t>(a[a[x]]);  // halving
            x = static_cast<std::uint32_t>(a[x]);
        }
        return x;
    }

    void unite(std::uint32_t x, std::uint32_t y) {
        x = find(x);
        y = find(y);
        if (x == y) return;
        if (a[x] > a[y]) std::swap(x, y);  // x keeps the larger set
        a[x] += a[y];
        a[y] = x;
    }
};

}  // namespace

ComponentSummary components_union_find(const GraphSample& g) {
    UnionFind uf(g.n);
    for (auto [u, v] : g.edges) uf.unite(u, v);
    ComponentSummary cs;
    for (std::uint32_t v = 0; v < g.n; ++v)
        if (uf.a[v] < 0) cs.sizes.push_back(static_cast<std::uint64_t>(-uf.a[v]));
    std::sort(cs.sizes.begin(), cs.sizes.end(), std::greater<>());
    return cs;
}

std::uint64_t largest_component(const GraphSample& g) {
    UnionFind uf(g.n);
    for (auto [u, v] : g.edges) uf.unite(u, v);
    std::int64_t best = -1;
    for (std::uint32_t v = 0; v < g.n; ++v) best = std::min(best, uf.a[v]);
    return static_cast<std::uint64_t>(-best);
}

std::uint64_t ComponentSummary::vertices_in_larger_than(std::uint64_t k) const {
    std::uint64_t total = 0;
    for (std::uint64_t s : sizes) {
        if (s <= k) break;  // sizes sorted descending
        total += s;
    }
    return total;
}

std::uint64_t cluster_of_random_vertex(const AdjacencyList& adj, RngStream& rng) {
    std::uint32_t v = static_cast<std::uint32_t>(rng.next_below(adj.size()));
    return explore_cluster(adj, v, false).component_size;
}

std::uint64_t cluster_of_random_vertex(const GraphSample& g, RngStream& rng) {
    AdjacencyList adj(g);
    return cluster_of_random_vertex(adj, rng);
}

void write_component_csv(std::ostream& os, const ComponentSummary& cs) {
    os << "size,count\n";
    std::uint64_t i = 0;
    while (i < cs.sizes.size()) {
        std::uint64_t j = i;
        while (j < cs.sizes.size() && cs.sizes[j] == cs.sizes[i]) ++j;
        os << cs.sizes[i] << ',' << (j - i) << '\n';
        i = j;
    }
}

void write_trace_csv(std::ostream& os, const ExplorationTrace& trace) {
    os << "t,active,unseen,explored\n";
    for (const auto& s : trace.steps)
        os << s.t << ',' << s.active << ',' << s.unseen << ',' << s.explored << '\n';
}

}  // namespace nr
