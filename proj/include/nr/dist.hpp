#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nr/rng.hpp"

namespace nr {

// Pareto-type tail: survival S(x) = min(1, c_f * x^{-(tau-1)}), i.e. F = 0
// below the scale x_m = c_f^{1/(tau-1)}. Requires tau > 3 so the second
// moment is finite.
struct ParetoTail {
    double tau;
    double c_f;
};

// Tabulated non-increasing quantile map u -> q on (0,1], interpreted as a
// left-continuous step function (value q[i] on (u[i-1], u[i]]). Escape hatch
// for weight laws without power-law structure.
struct QuantileTable {
    std::vector<double> u;  // strictly increasing, last entry 1.0
    std::vector<double> q;  // non-increasing, non-negative
};

struct MomentSet {
    double ew;
    double ew2;
    double ew3;  // +inf when tau <= 4
    double nu() const { return ew2 / ew; }
};

// The c_f at which nu = E(W^2)/E(W) equals 1 for a pure Pareto tail with
// exponent tau; equals ((tau-3)/(tau-2))^(tau-1).
double critical_cf(double tau);

class Distribution {
  public:
    explicit Distribution(ParetoTail law);
    explicit Distribution(QuantileTable table);

    static Distribution pareto(double tau, double c_f);
    static Distribution pareto_critical(double tau);

    // Generalized inverse of the survival function: inf{s : S(s) <= u} for
    // u in (0,1), and 0 at u = 1 by convention. Throws std::domain_error
    // outside (0,1].
    double quantile(double u) const;

    // Survival S(x); for tables this inverts the step map.
    double survival(double x) const;

    // Exact moments: closed form for Pareto, exact step sums for tables
    // (the quantile representation makes E[W^k] = integral of q(u)^k du).
    MomentSet moments() const;

    bool is_pareto() const;
    const ParetoTail* pareto_law() const;
    const QuantileTable* table_law() const;
    double scale() const;  // x_m for Pareto; smallest tabulated value else

  private:
    std::variant<ParetoTail, QuantileTable> law_;
};

// Weight vector w_j = quantile(j/n) for j = 1..n, with cached power sums.
// Immutable after construction; shared freely across workers.
class WeightSequence {
  public:
    static WeightSequence build(const Distribution& dist, std::uint64_t n);

    // Wraps an explicit non-increasing, non-negative vector (for tests and
    // CSV import).
    static WeightSequence from_raw(std::vector<double> w);

    std::uint64_t size() const { return w_.size(); }
    double weight(std::uint64_t j) const { return w_[j]; }  // 0-based
    const std::vector<double>& values() const { return w_; }

    double total() const { return total_; }      // sum w_i
    double sum_sq() const { return sum_sq_; }    // sum w_i^2
    double sum_cube() const { return sum_cube_; }

    // Offspring mean of the size-biased law: sum w^2 / sum w.
    double nu_n() const { return sum_sq_ / total_; }
    // Second moment of the size-biased weight: sum w^3 / sum w.
    double m2_star() const { return sum_cube_ / total_; }
    double max_weight() const { return w_.empty() ? 0.0 : w_.front(); }

    // F_n(x) = #{i : w_i <= x} / n, by binary search on the sorted vector.
    double empirical_df(double x) const;

  private:
    explicit WeightSequence(std::vector<double> w);

    std::vector<double> w_;  // non-increasing
    double total_ = 0.0;
    double sum_sq_ = 0.0;
    double sum_cube_ = 0.0;
};

// Sampler for the mark distribution P(M = m) = w_m / sum(w). The sampled
// weight w_M is the size-biased weight.
class MarkSampler {
  public:
    explicit MarkSampler(const WeightSequence& ws);

    std::uint32_t sample(RngStream& rng) const { return table_.sample(rng); }
    double probability(std::uint32_t m) const { return table_.probability(m); }
    std::size_t size() const { return table_.size(); }

  private:
    AliasTable table_;
};

// CSV round-trip (columns: index,weight), index 1-based.
void write_weights_csv(std::ostream& os, const WeightSequence& ws);
WeightSequence read_weights_csv(std::istream& is);

}  // namespace nr
