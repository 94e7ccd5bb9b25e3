#include "nr/graph.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nr {

std::vector<std::uint32_t> degree_array(const GraphSample& g) {
    std::vector<std::uint32_t> deg(g.n, 0);
    for (auto [u, v] : g.edges) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

std::map<std::uint64_t, std::uint64_t> degree_histogram(const GraphSample& g) {
    std::map<std::uint64_t, std::uint64_t> hist;
    for (std::uint32_t d : degree_array(g)) ++hist[d];
    return hist;
}

AdjacencyList::AdjacencyList(const GraphSample& g) {
    offsets_.assign(g.n + 1, 0);
    for (auto [u, v] : g.edges) {
        ++offsets_[u + 1];
        ++offsets_[v + 1];
    }
    for (std::uint64_t i = 1; i <= g.n; ++i) offsets_[i] += offsets_[i - 1];
    neighbors_.resize(2 * g.edges.size());
    std::vector<std::uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (auto [u, v] : g.edges) {
        neighbors_[cursor[u]++] = v;
        neighbors_[cursor[v]++] = u;
    }
    // sorted edges imply sorted neighbor lists for the second endpoint only;
    // sort each range so label-order scans are valid
    for (std::uint64_t v = 0; v < g.n; ++v)
        std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                  neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
}

std::uint64_t graph_fingerprint(const GraphSample& g) {
    // FNV-1a over n and the sorted edge list
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xff;
            h *= 0x100000001b3ull;
        }
    };
    mix(g.n);
    for (auto [u, v] : g.edges) mix((std::uint64_t(u) << 32) | v);
    return h;
}

void write_edges_csv(std::ostream& os, const GraphSample& g) {
    os << "u,v\n";
    for (auto [u, v] : g.edges)
        os << (u + 1) << ',' << (v + 1) << '\n';
}

GraphSample read_edges_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("u,v", 0) != 0)
        throw std::runtime_error("edge csv: missing 'u,v' header");
    GraphSample g;
    std::uint64_t max_v = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("edge csv: malformed row '" + line + "'");
        std::uint64_t a = std::stoull(line.substr(0, comma));
        std::uint64_t b = std::stoull(line.substr(comma + 1));
        if (a == 0 || b == 0 || a == b)
            throw std::runtime_error("edge csv: endpoints must be distinct and 1-based");
        std::uint32_t u = static_cast<std::uint32_t>(std::min(a, b) - 1);
        std::uint32_t v = static_cast<std::uint32_t>(std::max(a, b) - 1);
        g.edges.emplace_back(u, v);
        max_v = std::max(max_v, std::max(a, b));
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    g.n = max_v;
    return g;
}

namespace {
constexpr std::array<char, 4> kMagic = {'N', 'R', 'G', '1'};

void put_u64(std::ostream& os, std::uint64_t x) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xff);
    os.write(b, 8);
}

std::uint64_t get_u64(std::istream& is) {
    char b[8];
    is.read(b, 8);
    if (!is) throw std::runtime_error("edge binary: truncated");
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i)
        x |= std::uint64_t(static_cast<unsigned char>(b[i])) << (8 * i);
    return x;
}

void put_u32(std::ostream& os, std::uint32_t x) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xff);
    os.write(b, 4);
}

std::uint32_t get_u32(std::istream& is) {
    char b[4];
    is.read(b, 4);
    if (!is) throw std::runtime_error("edge binary: truncated");
    std::uint32_t x = 0;
    for (int i = 0; i < 4; ++i)
        x |= std::uint32_t(static_cast<unsigned char>(b[i])) << (8 * i);
    return x;
}
}  // namespace

void write_edges_binary(std::ostream& os, const GraphSample& g) {
    os.write(kMagic.data(), 4);
    put_u64(os, g.n);
    put_u64(os, g.edges.size());
    for (auto [u, v] : g.edges) {
        put_u32(os, u + 1);
        put_u32(os, v + 1);
    }
}

GraphSample read_edges_binary(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic.data(), 4) != 0)
        throw std::runtime_error("edge binary: bad magic, expected NRG1");
    GraphSample g;
    g.n = get_u64(is);
    std::uint64_t m = get_u64(is);
    g.edges.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        std::uint32_t u = get_u32(is);
        std::uint32_t v = get_u32(is);
        if (u == 0 || v == 0 || u == v || u > g.n || v > g.n)
            throw std::runtime_error("edge binary: invalid edge record");
        g.edges.emplace_back(std::min(u, v) - 1, std::max(u, v) - 1);
    }
    return g;
}

}  // namespace nr
