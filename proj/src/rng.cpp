#include "nr/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace nr {

namespace {

constexpr std::uint64_t kPhi = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id) {
    base_ = mix64(mix64(master_seed + kPhi) + stream_id * 0xD1B54A32D192ED03ull);
}

std::uint64_t RngStream::next_u64() {
    ++counter_;
    return mix64(base_ + counter_ * kPhi);
}

double RngStream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_unit_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
    if (n == 0) throw std::domain_error("next_below: empty range");
    // rejection from the top to avoid modulo bias
    std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
    for (;;) {
        std::uint64_t x = next_u64();
        if (x < limit) return x % n;
    }
}

std::uint64_t RngStream::next_poisson(double mean) {
    if (mean < 0.0 || !std::isfinite(mean))
        throw std::domain_error("next_poisson: bad mean");
    if (mean == 0.0) return 0;
    if (mean < 10.0) {
        // sequential inversion on the cdf
        double p = std::exp(-mean);
        double cdf = p;
        double u = next_unit();
        std::uint64_t k = 0;
        while (u > cdf) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
            if (k > 1000) break;  // cdf rounded to 1 long before this
        }
        return k;
    }
    // PTRS transformed rejection (Hoermann 1993), valid for mean >= 10.
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        double u = next_unit() - 0.5;
        double v = next_unit();
        double us = 0.5 - std::abs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * log_mean - mean - std::lgamma(kf + 1.0))
            return static_cast<std::uint64_t>(kf);
    }
}

AliasTable::AliasTable(std::span<const double> weights) {
    std::size_t n = weights.size();
    if (n == 0) throw std::invalid_argument("AliasTable: empty weights");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w))
            throw std::invalid_argument("AliasTable: weights must be finite and >= 0");
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("AliasTable: all weights zero");

    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    norm_.resize(n);
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) {
        norm_[i] = weights[i] / total;
        scaled[i] = norm_[i] * static_cast<double>(n);
    }

    std::vector<std::uint32_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));

    while (!small.empty() && !large.empty()) {
        std::uint32_t s = small.back();
        small.pop_back();
        std::uint32_t l = large.back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (std::uint32_t i : large) prob_[i] = 1.0;
    for (std::uint32_t i : small) prob_[i] = 1.0;  // numerical leftovers
}

std::uint32_t AliasTable::sample(RngStream& rng) const {
    std::uint32_t i = static_cast<std::uint32_t>(rng.next_below(prob_.size()));
    return rng.next_unit() < prob_[i] ? i : alias_[i];
}

}  // namespace nr
