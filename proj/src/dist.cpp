#include "nr/dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "nr/numeric.hpp"

namespace nr {

double critical_cf(double tau) {
    if (!(tau > 3.0)) throw std::domain_error("critical_cf: requires tau > 3");
    return std::pow((tau - 3.0) / (tau - 2.0), tau - 1.0);
}

Distribution::Distribution(ParetoTail law) : law_(law) {
    if (!(law.tau > 3.0)) throw std::domain_error("ParetoTail: requires tau > 3");
    if (!(law.c_f > 0.0)) throw std::domain_error("ParetoTail: requires c_f > 0");
}

Distribution::Distribution(QuantileTable table) : law_(std::move(table)) {
    const auto& t = std::get<QuantileTable>(law_);
    if (t.u.empty() || t.u.size() != t.q.size())
        throw std::invalid_argument("QuantileTable: need matching non-empty knots");
    for (std::size_t i = 0; i < t.u.size(); ++i) {
        if (!(t.u[i] > 0.0 && t.u[i] <= 1.0))
            throw std::invalid_argument("QuantileTable: knots must lie in (0,1]");
        if (i > 0 && !(t.u[i] > t.u[i - 1]))
            throw std::invalid_argument("QuantileTable: knots must be strictly increasing");
        if (t.q[i] < 0.0 || !std::isfinite(t.q[i]))
            throw std::invalid_argument("QuantileTable: values must be finite and >= 0");
        if (i > 0 && t.q[i] > t.q[i - 1])
            throw std::invalid_argument("QuantileTable: values must be non-increasing");
    }
    if (t.u.back() != 1.0)
        throw std::invalid_argument("QuantileTable: last knot must be at u = 1");
}

Distribution Distribution::pareto(double tau, double c_f) {
    return Distribution(ParetoTail{tau, c_f});
}

Distribution Distribution::pareto_critical(double tau) {
    return Distribution(ParetoTail{tau, critical_cf(tau)});
}

bool Distribution::is_pareto() const { return std::holds_alternative<ParetoTail>(law_); }

const ParetoTail* Distribution::pareto_law() const {
    return std::get_if<ParetoTail>(&law_);
}

const QuantileTable* Distribution::table_law() const {
    return std::get_if<QuantileTable>(&law_);
}

double Distribution::scale() const {
    if (const auto* p = std::get_if<ParetoTail>(&law_))
        return std::pow(p->c_f, 1.0 / (p->tau - 1.0));
    return std::get<QuantileTable>(law_).q.back();
}

double Distribution::quantile(double u) const {
    if (!(u > 0.0 && u <= 1.0))
        throw std::domain_error("quantile: u must lie in (0,1]");
    if (u == 1.0) return 0.0;  // generalized-inverse convention at u = 1
    if (const auto* p = std::get_if<ParetoTail>(&law_)) {
        double x_m = std::pow(p->c_f, 1.0 / (p->tau - 1.0));
        double v = std::pow(p->c_f / u, 1.0 / (p->tau - 1.0));
        return v >= x_m ? v : x_m;
    }
    const auto& t = std::get<QuantileTable>(law_);
    // left-continuous step: value of the first knot with u_i >= u
    auto it = std::lower_bound(t.u.begin(), t.u.end(), u);
    return t.q[static_cast<std::size_t>(it - t.u.begin())];
}

double Distribution::survival(double x) const {
    if (const auto* p = std::get_if<ParetoTail>(&law_)) {
        if (x <= 0.0) return 1.0;
        return std::min(1.0, p->c_f * std::pow(x, -(p->tau - 1.0)));
    }
    // S(x) = sup{u : q(u) > x} under the step semantics (measure of the
    // u-region where the quantile exceeds x).
    const auto& t = std::get<QuantileTable>(law_);
    double s = 0.0;
    for (std::size_t i = 0; i < t.u.size(); ++i)
        if (t.q[i] > x) s = t.u[i];
    return s;
}

MomentSet Distribution::moments() const {
    if (const auto* p = std::get_if<ParetoTail>(&law_)) {
        double x_m = std::pow(p->c_f, 1.0 / (p->tau - 1.0));
        double tau = p->tau;
        MomentSet ms;
        ms.ew = x_m * (tau - 1.0) / (tau - 2.0);
        ms.ew2 = x_m * x_m * (tau - 1.0) / (tau - 3.0);
        ms.ew3 = tau > 4.0 ? x_m * x_m * x_m * (tau - 1.0) / (tau - 4.0)
                           : std::numeric_limits<double>::infinity();
        return ms;
    }
    // E[W^k] = integral over (0,1] of q(u)^k du; exact for a step function.
    const auto& t = std::get<QuantileTable>(law_);
    MomentSet ms{0.0, 0.0, 0.0};
    double prev = 0.0;
    for (std::size_t i = 0; i < t.u.size(); ++i) {
        double du = t.u[i] - prev;
        double q = t.q[i];
        ms.ew += q * du;
        ms.ew2 += q * q * du;
        ms.ew3 += q * q * q * du;
        prev = t.u[i];
    }
    if (!(ms.ew > 0.0))
        throw std::domain_error("moments: table has zero mean");
    return ms;
}

WeightSequence::WeightSequence(std::vector<double> w) : w_(std::move(w)) {
    CompensatedSum s1, s2, s3;
    for (double x : w_) {
        s1.add(x);
        s2.add(x * x);
        s3.add(x * x * x);
    }
    total_ = s1.value();
    sum_sq_ = s2.value();
    sum_cube_ = s3.value();
    if (!(total_ > 0.0))
        throw std::invalid_argument("WeightSequence: total weight must be positive");
}

WeightSequence WeightSequence::build(const Distribution& dist, std::uint64_t n) {
    if (n < 2) throw std::invalid_argument("WeightSequence: need n >= 2");
    std::vector<double> w(n);
    for (std::uint64_t j = 1; j <= n; ++j)
        w[j - 1] = dist.quantile(static_cast<double>(j) / static_cast<double>(n));
    return WeightSequence(std::move(w));
}

WeightSequence WeightSequence::from_raw(std::vector<double> w) {
    if (w.empty()) throw std::invalid_argument("WeightSequence: empty");
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] < 0.0 || !std::isfinite(w[i]))
            throw std::invalid_argument("WeightSequence: weights must be finite and >= 0");
        if (i > 0 && w[i] > w[i - 1])
            throw std::invalid_argument("WeightSequence: weights must be non-increasing");
    }
    return WeightSequence(std::move(w));
}

double WeightSequence::empirical_df(double x) const {
    // w_ is non-increasing; count entries <= x from the tail.
    auto it = std::lower_bound(w_.begin(), w_.end(), x,
                               [](double wi, double v) { return wi > v; });
    return static_cast<double>(w_.end() - it) / static_cast<double>(w_.size());
}

MarkSampler::MarkSampler(const WeightSequence& ws) : table_(ws.values()) {}

void write_weights_csv(std::ostream& os, const WeightSequence& ws) {
    os << "index,weight\n";
    char buf[64];
    for (std::uint64_t j = 0; j < ws.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%llu,%.17g\n",
                      static_cast<unsigned long long>(j + 1), ws.weight(j));
        os << buf;
    }
}

WeightSequence read_weights_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("index,weight", 0) != 0)
        throw std::runtime_error("weights csv: missing 'index,weight' header");
    std::vector<double> w;
    std::uint64_t expect = 1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("weights csv: malformed row '" + line + "'");
        std::uint64_t idx = std::stoull(line.substr(0, comma));
        if (idx != expect)
            throw std::runtime_error("weights csv: indices must be 1..n in order");
        ++expect;
        w.push_back(std::stod(line.substr(comma + 1)));
    }
    return WeightSequence::from_raw(std::move(w));
}

}  // namespace nr
