#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nr {

// Counter-based generator: output i of a stream is mix64(base + i*PHI) where
// base is derived from (master_seed, stream_id). Any (seed, stream) pair
// yields the same sequence no matter how replicates are scheduled across
// workers, which is what the reproducibility contract requires.
class RngStream {
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    // uniform on [0,1)
    double next_unit();

    // uniform on (0,1]
    double next_unit_pos();

    // uniform integer in [0, n)
    std::uint64_t next_below(std::uint64_t n);

    bool next_bernoulli(double p) { return next_unit() < p; }

    // Poisson(mean): sequential inversion for small means, transformed
    // rejection (PTRS) for large ones. Means grow like n^{1/(tau-1)} here,
    // so the large-mean path is exercised routinely.
    std::uint64_t next_poisson(double mean);

  private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

// Walker alias table for a fixed discrete distribution; sampling is two
// uniforms and O(1). Read-only after construction, safe to share.
class AliasTable {
  public:
    explicit AliasTable(std::span<const double> weights);

    std::uint32_t sample(RngStream& rng) const;

    std::size_t size() const { return prob_.size(); }
    double probability(std::size_t i) const { return norm_[i]; }

  private:
    std::vector<double> prob_;          // acceptance threshold per bucket
    std::vector<std::uint32_t> alias_;  // fallback index per bucket
    std::vector<double> norm_;          // exact probabilities w_i / sum(w)
};

}  // namespace nr
