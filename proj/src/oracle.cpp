#include "nr/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "nr/errors.hpp"
#include "nr/numeric.hpp"
#include "nr/sampler.hpp"

namespace nr {

double ExactLaw::prob_of(std::uint64_t value) const {
    for (std::size_t i = 0; i < support.size(); ++i)
        if (support[i] == value) return probs[i];
    return 0.0;
}

double ExactLaw::tail_above(std::uint64_t k) const {
    double p = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i)
        if (support[i] > k) p += probs[i];
    return p;
}

std::size_t pair_index(std::uint64_t n, std::uint32_t i, std::uint32_t j) {
    if (i >= j || j >= n) throw std::invalid_argument("pair_index: need i < j < n");
    // pairs (0,1),(0,2),...,(0,n-1),(1,2),... in lexicographic order;
    // i*n - i(i+1)/2 pairs have a smaller first endpoint
    std::uint64_t before = i * n - std::uint64_t(i) * (i + 1) / 2;
    return static_cast<std::size_t>(before + (j - i - 1));
}

std::uint64_t graph_mask(const GraphSample& g) {
    std::uint64_t m = g.n * (g.n - 1) / 2;
    if (m > 63) throw resource_error("graph_mask: needs C(n,2) <= 63");
    std::uint64_t mask = 0;
    for (auto [u, v] : g.edges) mask |= std::uint64_t(1) << pair_index(g.n, u, v);
    return mask;
}

namespace {

constexpr std::uint64_t kOracleMaxN = 6;

void check_oracle_size(const WeightSequence& ws) {
    if (ws.size() > kOracleMaxN)
        throw resource_error("oracle: exact enumeration is limited to n <= 6");
    if (ws.size() < 2)
        throw std::invalid_argument("oracle: need n >= 2");
}

}  // namespace

std::vector<std::vector<double>> exact_edge_marginals(const WeightSequence& ws) {
    check_oracle_size(ws);
    std::size_t n = ws.size();
    std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j)
            if (i != j) p[i][j] = edge_probability(ws, std::min(i, j), std::max(i, j));
    return p;
}

std::vector<double> exact_graph_law(const WeightSequence& ws) {
    check_oracle_size(ws);
    std::uint64_t n = ws.size();
    std::uint64_t m = n * (n - 1) / 2;
    // log p and log(1-p) per pair, in the pair_index order
    std::vector<double> logp(m), logq(m);
    std::size_t idx = 0;
    for (std::uint32_t i = 0; i + 1 < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j, ++idx) {
            double lambda = ws.weight(i) * ws.weight(j) / ws.total();
            // p = 1 - e^{-lambda}; log(1-p) = -lambda exactly
            double p = -std::expm1(-lambda);
            logp[idx] = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
            logq[idx] = -lambda;
        }
    }
    std::vector<double> law(std::uint64_t(1) << m, 0.0);
    for (std::uint64_t mask = 0; mask < law.size(); ++mask) {
        double lp = 0.0;
        for (std::uint64_t b = 0; b < m; ++b)
            lp += (mask >> b) & 1 ? logp[b] : logq[b];
        law[mask] = std::exp(lp);
    }
    return law;
}

ComponentLaws exact_component_laws(const WeightSequence& ws) {
    check_oracle_size(ws);
    std::uint64_t n = ws.size();
    std::uint64_t m = n * (n - 1) / 2;
    std::vector<double> law = exact_graph_law(ws);

    std::vector<double> p_cmax(n + 1, 0.0);
    std::vector<double> p_cv(n + 1, 0.0);

    // pair list in mask-bit order
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(m);
    for (std::uint32_t i = 0; i + 1 < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

    std::array<std::uint32_t, kOracleMaxN> parent{};
    for (std::uint64_t mask = 0; mask < law.size(); ++mask) {
        double p = law[mask];
        if (p == 0.0) continue;
        for (std::uint32_t v = 0; v < n; ++v) parent[v] = v;
        auto find = [&](std::uint32_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::uint64_t b = 0; b < m; ++b) {
            if ((mask >> b) & 1) {
                std::uint32_t ra = find(pairs[b].first), rb = find(pairs[b].second);
                if (ra != rb) parent[ra] = rb;
            }
        }
        std::array<std::uint32_t, kOracleMaxN> size{};
        for (std::uint32_t v = 0; v < n; ++v) ++size[find(v)];
        std::uint32_t cmax = 0;
        for (std::uint32_t v = 0; v < n; ++v) cmax = std::max(cmax, size[v]);
        p_cmax[cmax] += p;
        for (std::uint32_t v = 0; v < n; ++v) p_cv[size[find(v)]] += p / static_cast<double>(n);
    }

    auto pack = [n](const std::vector<double>& probs) {
        ExactLaw law;
        for (std::uint64_t s = 1; s <= n; ++s) {
            law.support.push_back(s);
            law.probs.push_back(probs[s]);
        }
        return law;
    };
    return ComponentLaws{pack(p_cmax), pack(p_cv)};
}

void write_law_csv(std::ostream& os, const ExactLaw& law) {
    os << "value,prob\n";
    char buf[64];
    for (std::size_t i = 0; i < law.support.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%llu,%.17g\n",
                      static_cast<unsigned long long>(law.support[i]), law.probs[i]);
        os << buf;
    }
}

}  // namespace nr
