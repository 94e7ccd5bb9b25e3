#include "nr/mc.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <span>
#include <thread>
#include <vector>

#include "nr/bounds.hpp"
#include "nr/errors.hpp"
#include "nr/explore.hpp"
#include "nr/numeric.hpp"
#include "nr/oracle.hpp"
#include "nr/sampler.hpp"

namespace nr {

namespace {

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Chunked dynamic dispatch over replicate indices. Each worker pulls a block
// of indices; per-replicate state depends only on the index, so scheduling
// cannot change any result. `workers` must already be resolved (> 0).
void parallel_replicates(std::uint64_t total, int workers,
                         const std::function<void(std::uint64_t, std::size_t)>& body) {
    if (static_cast<std::uint64_t>(workers) > total)
        workers = static_cast<int>(std::max<std::uint64_t>(1, total));
    if (workers <= 1) {
        for (std::uint64_t r = 0; r < total; ++r) body(r, 0);
        return;
    }
    std::uint64_t chunk = std::max<std::uint64_t>(1, total / (std::uint64_t(workers) * 16));
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int wkr = 0; wkr < workers; ++wkr) {
        pool.emplace_back([&, wkr] {
            try {
                for (;;) {
                    std::uint64_t lo = next.fetch_add(chunk);
                    if (lo >= total) break;
                    std::uint64_t hi = std::min(total, lo + chunk);
                    for (std::uint64_t r = lo; r < hi; ++r)
                        body(r, static_cast<std::size_t>(wkr));
                }
            } catch (...) {
                errors[static_cast<std::size_t>(wkr)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

double mean_of(std::span<const double> xs) {
    return pairwise_sum(xs) / static_cast<double>(xs.size());
}

double stderr_of_mean(std::span<const double> xs, double mean) {
    if (xs.size() < 2) return 0.0;
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - mean) * (xs[i] - mean);
    double var = pairwise_sum(sq) / static_cast<double>(xs.size() - 1);
    return std::sqrt(var / static_cast<double>(xs.size()));
}

double tv_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return 0.5 * s;
}

// TV-style quantities are sharp threshold checks: the threshold is the
// bound, the stderr is zero, and the shared verdict/retry logic applies.
void attach_threshold(McReport& rep, double threshold) {
    rep.bound_value = threshold;
    rep.stderr_ = 0.0;
    rep.ci_lo = rep.ci_hi = rep.estimate;
}

struct QuantityResult {
    McReport report;
    bool bound_checked = false;  // retry-on-violation applies only to checked bounds
};

QuantityResult run_once(const Experiment& e, int workers);

// ---- per-quantity runners ---------------------------------------------------

QuantityResult run_cmax_tail(const Experiment& e, const CmaxTail& q, int workers) {
    const auto* law = e.dist.pareto_law();
    if (!law) throw config_error("cmax tail experiments require a pareto weight law");
    if (!(q.omega > 1.0)) throw config_error("cmax tail: omega must be > 1");
    double threshold =
        q.omega * std::pow(static_cast<double>(e.n), cmax_window_exponent(law->tau));

    WeightSequence ws = WeightSequence::build(e.dist, e.n);
    MarkSampler marks(ws);
    std::vector<std::uint8_t> hit(e.replicates, 0);
    parallel_replicates(e.replicates, workers, [&](std::uint64_t r, std::size_t) {
        GraphSample g = sample_poisson_collapse(ws, marks, RngStream(e.seed, r));
        hit[r] = static_cast<double>(largest_component(g)) > threshold ? 1 : 0;
    });
    std::uint64_t count = 0;
    for (auto h : hit) count += h;

    QuantityResult res;
    res.report = binomial_report(count, e.replicates);
    if (law->tau > 4.0) {
        // leading-constant bound with the declared 1.5 slack for the
        // uncomputable 1 + O(.) factor
        TailBound tb = cmax_tail_leading_bound(e.dist.moments(), law->tau, q.omega);
        res.report.bound_value = 1.5 * tb.value;
        res.bound_checked = true;
    }
    return res;
}

QuantityResult run_cluster_tail(const Experiment& e, const ClusterTail& q, int workers) {
    WeightSequence ws = WeightSequence::build(e.dist, e.n);
    MarkSampler marks(ws);
    std::vector<std::uint8_t> hit(e.replicates, 0);
    parallel_replicates(e.replicates, workers, [&](std::uint64_t r, std::size_t) {
        RngStream rng(e.seed, r);
        GraphSample g = sample_poisson_collapse(ws, marks, rng);
        // reuse the replicate stream for the vertex pick: the sampler has
        // consumed a deterministic-for-this-replicate number of draws
        std::uint64_t size = cluster_of_random_vertex(g, rng);
        hit[r] = size > q.k ? 1 : 0;
    });
    std::uint64_t count = 0;
    for (auto h : hit) count += h;
    QuantityResult res;
    res.report = binomial_report(count, e.replicates);
    return res;
}

QuantityResult run_walk_positivity(const Experiment& e, const WalkPositivity& q,
                                   int workers) {
    WeightSequence ws = WeightSequence::build(e.dist, e.n);
    MarkSampler marks(ws);
    std::vector<std::uint8_t> pos(e.replicates, 0);
    parallel_replicates(e.replicates, workers, [&](std::uint64_t r, std::size_t) {
        RngStream rng(e.seed, r);
        WalkPath p = run_walk(ws, marks, q.cfg, rng, q.dominate_first_step, false);
        pos[r] = p.positive_in_window ? 1 : 0;
    });
    std::uint64_t count = 0;
    for (auto h : pos) count += h;
    QuantityResult res;
    res.report = binomial_report(count, e.replicates);
    return res;
}

QuantityResult run_stop_time_mean(const Experiment& e, const StopTimeMean& q,
                                  int workers) {
    WeightSequence ws = WeightSequence::build(e.dist, e.n);
    MarkSampler marks(ws);
    std::vector<double> stops(e.replicates, 0.0);
    parallel_replicates(e.replicates, workers, [&](std::uint64_t r, std::size_t) {
        RngStream rng(e.seed, r);
        WalkPath p = run_walk(ws, marks, q.cfg, rng, true, false);
        stops[r] = static_cast<double>(p.stop_time);
    });
    QuantityResult res;
    res.report.estimate = mean_of(stops);
    res.report.stderr_ = stderr_of_mean(stops, res.report.estimate);
    res.report.ci_lo = res.report.estimate - 1.96 * res.report.stderr_;
    res.report.ci_hi = res.report.estimate + 1.96 * res.report.stderr_;
    auto bound = expected_stop_upper(walk_diagnostics(ws, q.cfg));
    if (bound) {
        res.report.bound_value = *bound;
        res.bound_checked = true;
    } else {
        res.report.verdict = Verdict::Vacuous;
    }
    return res;
}

QuantityResult run_overshoot(const Experiment& e, const OvershootTail& q, int workers) {
    WeightSequence ws = WeightSequence::build(e.dist, e.n);
    MarkSampler marks(ws);
    // per replicate: 0 = no conditioning event, otherwise overshoot + 1
    std::vector<std::uint64_t> over(e.replicates, 0);
    parallel_replicates(e.replicates, workers, [&](std::uint64_t r, std::size_t) {
        RngStream rng(e.seed, r);
        WalkPath p = run_walk(ws, marks, q.cfg, rng, true, false);
        if (p.stop_value >= q.cfg.barrier)
            over[r] = static_cast<std::uint64_t>(p.stop_value - q.cfg.barrier) + 1;
    });
    std::uint64_t cond = 0;
    std::vector<std::uint64_t> exceed(q.k_max + 1, 0);
    for (std::uint64_t v : over) {
        if (v == 0) continue;
        ++cond;
        std::uint64_t ov = v - 1;
        for (std::size_t k = 0; k <= std::min<std::uint64_t>(ov, q.k_max); ++k)
            ++exceed[k];
    }

    QuantityResult res;
    if (cond == 0) {
        // no walk reached the barrier: flagged, not an error
        res.report.verdict = Verdict::Informational;
        return res;
    }
    // report the k with the worst margin against the Poisson(w_1) tail
    double w1 = ws.max_weight();
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= q.k_max; ++k) {
        double emp = static_cast<double>(exceed[k]) / static_cast<double>(cond);
        double se = std::sqrt(std::max(emp * (1.0 - emp), 1.0 / static_cast<double>(cond)) /
                              static_cast<double>(cond));
        double margin = (emp - poisson_tail(w1, k)) / se;
        if (margin > worst) {
            worst = margin;
            res.report.estimate = emp;
            res.report.stderr_ = se;
            res.report.bound_value = poisson_tail(w1, k);
        }
    }
    res.report.ci_lo = std::max(0.0, res.report.estimate - 1.96 * res.report.stderr_);
    res.report.ci_hi = std::min(1.0, res.report.estimate + 1.96 * res.report.stderr_);
    res.bound_checked = true;
    return res;
}

QuantityResult run_bp_coupling(const Experiment& e, const BpCouplingTv& q, int workers) {
    WeightSequence ws = WeightSequence::build(e.dist, e.n);
    MarkSampler marks(ws);
    ComponentLaws laws = exact_component_laws(ws);  // refuses n > 6
    std::uint64_t cap = q.cap == 0 ? 10 * e.n : q.cap;

    int w = workers;
    std::vector<std::vector<std::uint64_t>> bins(
        static_cast<std::size_t>(w), std::vector<std::uint64_t>(e.n + 1, 0));
    std::vector<std::uint64_t> censored(static_cast<std::size_t>(w), 0);
    parallel_replicates(e.replicates, w, [&](std::uint64_t r, std::size_t wkr) {
        RngStream rng(e.seed, r);
        BpTrace t = run_marked_bp(ws, marks, rng, cap);
        if (t.censored)
            ++censored[wkr];
        else
            ++bins[wkr][std::min<std::uint64_t>(t.explored, e.n)];
    });
    std::vector<double> emp(e.n, 0.0);
    std::uint64_t cens = 0;
    for (int i = 0; i < w; ++i) {
        cens += censored[static_cast<std::size_t>(i)];
        for (std::uint64_t s = 1; s <= e.n; ++s)
            emp[s - 1] += static_cast<double>(bins[static_cast<std::size_t>(i)][s]);
    }
    for (double& x : emp) x /= static_cast<double>(e.replicates);

    QuantityResult res;
    res.report.censored_fraction =
        static_cast<double>(cens) / static_cast<double>(e.replicates);
    res.report.estimate = tv_distance(emp, laws.random_cluster.probs);
    attach_threshold(res.report, q.threshold);
    res.bound_checked = true;
    return res;
}

QuantityResult run_degree_tv(const Experiment& e, const DegreeTv& q, int workers) {
    WeightSequence ws = WeightSequence::build(e.dist, e.n);
    MarkSampler marks(ws);
    std::vector<double> pk = degree_pmf(e.dist, q.k_max);

    int w = workers;
    // bins 0..k_max plus one overflow cell
    std::vector<std::vector<std::uint64_t>> bins(
        static_cast<std::size_t>(w), std::vector<std::uint64_t>(q.k_max + 2, 0));
    parallel_replicates(e.replicates, w, [&](std::uint64_t r, std::size_t wkr) {
        GraphSample g = sample_poisson_collapse(ws, marks, RngStream(e.seed, r));
        for (std::uint32_t d : degree_array(g))
            ++bins[wkr][std::min<std::size_t>(d, q.k_max + 1)];
    });
    std::vector<double> emp(q.k_max + 2, 0.0);
    for (int i = 0; i < w; ++i)
        for (std::size_t k = 0; k < emp.size(); ++k)
            emp[k] += static_cast<double>(bins[static_cast<std::size_t>(i)][k]);
    double total = static_cast<double>(e.n) * static_cast<double>(e.replicates);
    for (double& x : emp) x /= total;

    double head = 0.0;
    for (double v : pk) head += v;
    std::vector<double> model(pk);
    model.push_back(std::max(0.0, 1.0 - head));  // overflow mass

    QuantityResult res;
    res.report.estimate = tv_distance(emp, model);
    attach_threshold(res.report, q.threshold);
    res.bound_checked = true;
    return res;
}

QuantityResult run_graph_law_tv(const Experiment& e, const GraphLawTv& q, int workers) {
    WeightSequence ws = WeightSequence::build(e.dist, e.n);
    MarkSampler marks(ws);
    std::vector<double> law = exact_graph_law(ws);  // refuses n > 6

    int w = workers;
    std::vector<std::vector<std::uint64_t>> bins(
        static_cast<std::size_t>(w), std::vector<std::uint64_t>(law.size(), 0));
    parallel_replicates(e.replicates, w, [&](std::uint64_t r, std::size_t wkr) {
        RngStream rng(e.seed, r);
        GraphSample g = q.method == SampleMethod::Naive
                            ? sample_naive(ws, rng)
                            : sample_poisson_collapse(ws, marks, rng);
        ++bins[wkr][graph_mask(g)];
    });
    std::vector<double> emp(law.size(), 0.0);
    for (int i = 0; i < w; ++i)
        for (std::size_t m = 0; m < law.size(); ++m)
            emp[m] += static_cast<double>(bins[static_cast<std::size_t>(i)][m]);
    for (double& x : emp) x /= static_cast<double>(e.replicates);

    QuantityResult res;
    res.report.estimate = tv_distance(emp, law);
    attach_threshold(res.report, q.threshold);
    res.bound_checked = true;
    return res;
}

}  // namespace

void validate_experiment(const Experiment& e) {
    if (e.n < 2) throw config_error("experiment: n must be >= 2");
    bool single_sample_ok = std::holds_alternative<DegreeTv>(e.quantity);
    if (e.replicates < 100 && !single_sample_ok)
        throw config_error("experiment: replicates must be >= 100");
    if (e.replicates < 1) throw config_error("experiment: replicates must be >= 1");
    if (e.n > 50'000'000)
        throw resource_error("experiment: n > 5*10^7 refused; reduce n");
    double cost = static_cast<double>(e.n) * static_cast<double>(e.replicates);
    if (cost > 2e11)
        throw resource_error(
            "experiment: n * replicates exceeds 2*10^11; split the run or reduce "
            "replicates");
}

namespace {

QuantityResult run_once(const Experiment& e, int raw_workers) {
    validate_experiment(e);
    int workers = resolve_workers(raw_workers);
    return std::visit(
        [&](const auto& q) -> QuantityResult {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, CmaxTail>) return run_cmax_tail(e, q, workers);
            else if constexpr (std::is_same_v<T, ClusterTail>)
                return run_cluster_tail(e, q, workers);
            else if constexpr (std::is_same_v<T, WalkPositivity>)
                return run_walk_positivity(e, q, workers);
            else if constexpr (std::is_same_v<T, StopTimeMean>)
                return run_stop_time_mean(e, q, workers);
            else if constexpr (std::is_same_v<T, OvershootTail>)
                return run_overshoot(e, q, workers);
            else if constexpr (std::is_same_v<T, BpCouplingTv>)
                return run_bp_coupling(e, q, workers);
            else if constexpr (std::is_same_v<T, DegreeTv>)
                return run_degree_tv(e, q, workers);
            else
                return run_graph_law_tv(e, q, workers);
        },
        e.quantity);
}

}  // namespace

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::BoundHolds: return "bound_holds";
        case Verdict::BoundViolated: return "bound_violated";
        case Verdict::Vacuous: return "vacuous";
        case Verdict::Informational: return "informational";
    }
    return "informational";
}

McReport binomial_report(std::uint64_t count, std::uint64_t replicates) {
    McReport r;
    double n = static_cast<double>(replicates);
    double p = static_cast<double>(count) / n;
    r.estimate = p;
    r.stderr_ = std::sqrt(p * (1.0 - p) / n);
    if (count == 0) {
        r.ci_lo = 0.0;
        r.ci_hi = -std::log(0.025) / n;  // rule-of-three style upper limit
    } else if (count == replicates) {
        r.ci_lo = 1.0 + std::log(0.025) / n;
        r.ci_hi = 1.0;
    } else {
        r.ci_lo = std::max(0.0, p - 1.96 * r.stderr_);
        r.ci_hi = std::min(1.0, p + 1.96 * r.stderr_);
    }
    return r;
}

Verdict dominance_check(const McReport& lhs, double rhs_value, double rhs_stderr) {
    double pooled = std::sqrt(lhs.stderr_ * lhs.stderr_ + rhs_stderr * rhs_stderr);
    return lhs.estimate <= rhs_value + 3.0 * pooled ? Verdict::BoundHolds
                                                    : Verdict::BoundViolated;
}

McReport run_experiment(const Experiment& e, int workers) {
    auto t0 = std::chrono::steady_clock::now();
    QuantityResult res = run_once(e, workers);
    McReport& rep = res.report;

    if (res.bound_checked) {
        if (rep.censored_fraction > 0.01) {
            rep.verdict = Verdict::Informational;
        } else {
            rep.verdict = dominance_check(rep, *rep.bound_value);
            if (rep.verdict == Verdict::BoundViolated) {
                // significant violations are re-checked once at 4x replicates
                Experiment retry = e;
                retry.replicates = e.replicates * 4;
                QuantityResult res2 = run_once(retry, workers);
                if (res2.bound_checked && res2.report.censored_fraction <= 0.01) {
                    rep = res2.report;
                    rep.verdict = dominance_check(rep, *rep.bound_value);
                }
            }
        }
    }
    auto t1 = std::chrono::steady_clock::now();
    rep.runtime_s = std::chrono::duration<double>(t1 - t0).count();
    return rep;
}

namespace {

std::string fmt_double(double x) {
    // shortest representation that round-trips exactly
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

std::string report_json_impl(const McReport& r, bool with_runtime) {
    std::string s = "{";
    s += "\"estimate\":" + fmt_double(r.estimate);
    s += ",\"stderr\":" + fmt_double(r.stderr_);
    s += ",\"ci95\":[" + fmt_double(r.ci_lo) + "," + fmt_double(r.ci_hi) + "]";
    s += ",\"bound_value\":";
    s += r.bound_value ? fmt_double(*r.bound_value) : std::string("null");
    s += ",\"verdict\":\"" + verdict_name(r.verdict) + "\"";
    s += ",\"runtime_s\":" + fmt_double(with_runtime ? r.runtime_s : 0.0);
    s += ",\"censored_fraction\":" + fmt_double(r.censored_fraction);
    s += "}";
    return s;
}

}  // namespace

std::string report_json(const McReport& r) { return report_json_impl(r, true); }

std::string canonical_report_json(const McReport& r) { return report_json_impl(r, false); }

std::string report_csv_header() {
    return "estimate,stderr,ci_lo,ci_hi,bound_value,verdict,runtime_s,censored_fraction";
}

std::string report_csv_row(const McReport& r) {
    std::string s = fmt_double(r.estimate) + "," + fmt_double(r.stderr_) + "," +
                    fmt_double(r.ci_lo) + "," + fmt_double(r.ci_hi) + ",";
    if (r.bound_value) s += fmt_double(*r.bound_value);
    s += "," + verdict_name(r.verdict) + "," + fmt_double(r.runtime_s) + "," +
         fmt_double(r.censored_fraction);
    return s;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace nr
