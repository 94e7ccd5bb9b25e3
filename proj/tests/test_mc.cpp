#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nr/bounds.hpp"
#include "nr/errors.hpp"
#include "nr/mc.hpp"
#include "nr/oracle.hpp"

using namespace nr;

namespace {

Experiment base_experiment(Quantity q, std::uint64_t n = 4, std::uint64_t reps = 10000,
                           std::uint64_t seed = 700, double tau = 3.5) {
    return Experiment{Distribution::pareto_critical(tau), n, reps, q, seed};
}

}  // namespace

TEST_CASE("binomial report: rule-of-three upper limit at zero events") {
    McReport r = binomial_report(0, 10000);
    CHECK(r.estimate == 0.0);
    CHECK(r.stderr_ == 0.0);
    CHECK(r.ci_lo == 0.0);
    CHECK(r.ci_hi == doctest::Approx(3.6888794541139363 / 10000.0).epsilon(1e-12));

    McReport full = binomial_report(10000, 10000);
    CHECK(full.estimate == 1.0);
    CHECK(full.ci_hi == 1.0);
    CHECK(full.ci_lo == doctest::Approx(1.0 - 3.6888794541139363 / 10000.0).epsilon(1e-9));

    McReport mid = binomial_report(3000, 10000);
    CHECK(mid.estimate == doctest::Approx(0.3));
    CHECK(mid.ci_lo < 0.3);
    CHECK(mid.ci_hi > 0.3);
    CHECK(mid.ci_lo <= mid.estimate);
    CHECK(mid.estimate <= mid.ci_hi);
}

TEST_CASE("confidence interval calibration on a known bernoulli") {
    // coverage of the 95% interval over 1000 meta-replicates of
    // binomial(1000, 0.3) draws
    RngStream rng(701, 0);
    int covered = 0;
    const int meta = 1000;
    const int rep = 1000;
    for (int m = 0; m < meta; ++m) {
        std::uint64_t count = 0;
        for (int i = 0; i < rep; ++i) count += rng.next_bernoulli(0.3) ? 1 : 0;
        McReport r = binomial_report(count, rep);
        if (r.ci_lo <= 0.3 && 0.3 <= r.ci_hi) ++covered;
    }
    double coverage = static_cast<double>(covered) / meta;
    CHECK(coverage >= 0.93);
    CHECK(coverage <= 0.97);
}

TEST_CASE("dominance check") {
    McReport lhs;
    lhs.estimate = 0.10;
    lhs.stderr_ = 0.003;
    CHECK(dominance_check(lhs, 0.12) == Verdict::BoundHolds);
    lhs.estimate = 0.20;
    CHECK(dominance_check(lhs, 0.12) == Verdict::BoundViolated);
    // pooled stderr widens the band
    CHECK(dominance_check(lhs, 0.195, 0.01) == Verdict::BoundHolds);
}

TEST_CASE("cluster tail estimate matches the oracle at n=4") {
    WeightSequence ws = WeightSequence::build(Distribution::pareto_critical(3.5), 4);
    double exact = exact_component_laws(ws).random_cluster.tail_above(2);
    Experiment e = base_experiment(ClusterTail{2}, 4, 100000);
    McReport r = run_experiment(e, 2);
    CHECK(std::abs(r.estimate - exact) < 3.0 * r.stderr_);
    CHECK(r.verdict == Verdict::Informational);  // no closed-form bound attached
}

TEST_CASE("reports are byte-identical across worker counts") {
    Experiment walk = base_experiment(
        WalkPositivity{WalkConfig{12, 100, 5}, true}, 50, 20000);
    std::string one = canonical_report_json(run_experiment(walk, 1));
    std::string eight = canonical_report_json(run_experiment(walk, 8));
    CHECK(one == eight);

    Experiment stop = base_experiment(StopTimeMean{WalkConfig{2, 400, 1}}, 100, 20000,
                                      702, 5.0);
    CHECK(canonical_report_json(run_experiment(stop, 1)) ==
          canonical_report_json(run_experiment(stop, 8)));

    Experiment cmax = base_experiment(CmaxTail{2.0}, 500, 400, 703, 5.0);
    CHECK(canonical_report_json(run_experiment(cmax, 1)) ==
          canonical_report_json(run_experiment(cmax, 8)));

    // histogram-reduction quantities merge per-worker integer bins
    Experiment over = base_experiment(OvershootTail{WalkConfig{2, 400, 1}, 8}, 100,
                                      20000, 711, 5.0);
    CHECK(canonical_report_json(run_experiment(over, 1)) ==
          canonical_report_json(run_experiment(over, 8)));
    Experiment coup = base_experiment(BpCouplingTv{}, 4, 20000, 712);
    CHECK(canonical_report_json(run_experiment(coup, 1)) ==
          canonical_report_json(run_experiment(coup, 8)));
}

TEST_CASE("stop-time mean experiment: bound wiring and vacuous regime") {
    // tau=5 critical at n=100 has a positive bracket: bound checked
    Experiment e = base_experiment(StopTimeMean{WalkConfig{2, 400, 1}}, 100, 20000,
                                   704, 5.0);
    McReport r = run_experiment(e, 2);
    REQUIRE(r.bound_value.has_value());
    CHECK(r.verdict == Verdict::BoundHolds);
    CHECK(r.estimate >= 1.0);

    // n=4 critical tau=3.5 is far from criticality: bracket negative
    WeightSequence ws4 = WeightSequence::build(Distribution::pareto_critical(3.5), 4);
    REQUIRE(!expected_stop_upper(walk_diagnostics(ws4, WalkConfig{2, 400, 1})).has_value());
    Experiment v = base_experiment(StopTimeMean{WalkConfig{2, 400, 1}}, 4, 10000);
    McReport rv = run_experiment(v, 2);
    CHECK(rv.verdict == Verdict::Vacuous);
    CHECK(!rv.bound_value.has_value());
}

TEST_CASE("overshoot experiment: bound holds; empty conditioning is informational") {
    Experiment e = base_experiment(OvershootTail{WalkConfig{2, 400, 1}, 8}, 100, 50000,
                                   705, 5.0);
    McReport r = run_experiment(e, 2);
    REQUIRE(r.bound_value.has_value());
    CHECK(r.verdict == Verdict::BoundHolds);

    // unreachable barrier: no conditioning events
    Experiment z = base_experiment(OvershootTail{WalkConfig{5000, 5000, 1}, 8}, 10, 200,
                                   706, 5.0);
    McReport rz = run_experiment(z, 2);
    CHECK(rz.verdict == Verdict::Informational);
}

TEST_CASE("bp coupling tv experiment and censoring downgrade") {
    Experiment e = base_experiment(BpCouplingTv{}, 4, 30000, 707);
    McReport r = run_experiment(e, 2);
    CHECK(r.censored_fraction == 0.0);
    CHECK(r.estimate < 0.02);
    CHECK(r.verdict == Verdict::BoundHolds);

    // cap = 1 censors every run that explores past the root
    Experiment c = base_experiment(BpCouplingTv{1, 0.02}, 4, 10000, 708);
    McReport rc = run_experiment(c, 2);
    CHECK(rc.censored_fraction > 0.01);
    CHECK(rc.verdict == Verdict::Informational);
}

TEST_CASE("graph law tv experiment at oracle scale") {
    for (auto method : {SampleMethod::Naive, SampleMethod::PoissonCollapse}) {
        Experiment e = base_experiment(GraphLawTv{method, 0.02}, 4, 30000, 709);
        McReport r = run_experiment(e, 2);
        CHECK(r.estimate < 0.02);
        CHECK(r.verdict == Verdict::BoundHolds);
    }
}

TEST_CASE("degree tv experiment accepts a single sample") {
    Experiment e = base_experiment(DegreeTv{50, 0.05}, 2000, 1, 710, 5.0);
    McReport r = run_experiment(e, 2);
    CHECK(r.estimate < 0.05);
    CHECK(r.verdict == Verdict::BoundHolds);
}

TEST_CASE("experiment validation and resource guards") {
    CHECK_THROWS_AS(run_experiment(base_experiment(ClusterTail{2}, 4, 50), 1),
                    config_error);
    CHECK_THROWS_AS(
        run_experiment(base_experiment(ClusterTail{2}, 1000000000ull, 1000), 1),
        resource_error);
    CHECK_THROWS_AS(
        run_experiment(base_experiment(ClusterTail{2}, 10000000, 10000000), 1),
        resource_error);
    // cmax tail requires a pareto law
    QuantileTable t;
    t.u = {1.0};
    t.q = {1.0};
    Experiment bad{Distribution(t), 100, 1000, CmaxTail{2.0}, 0};
    CHECK_THROWS_AS(run_experiment(bad, 1), config_error);
}

TEST_CASE("report serialization") {
    McReport r;
    r.estimate = 0.25;
    r.stderr_ = 0.01;
    r.ci_lo = 0.23;
    r.ci_hi = 0.27;
    r.bound_value = 0.5;
    r.verdict = Verdict::BoundHolds;
    r.runtime_s = 1.5;
    r.censored_fraction = 0.0;
    CHECK(report_json(r) ==
          "{\"estimate\":0.25,\"stderr\":0.01,\"ci95\":[0.23,0.27],\"bound_value\":0.5,"
          "\"verdict\":\"bound_holds\",\"runtime_s\":1.5,\"censored_fraction\":0}");
    // canonical form zeroes the wall clock only
    CHECK(canonical_report_json(r) ==
          "{\"estimate\":0.25,\"stderr\":0.01,\"ci95\":[0.23,0.27],\"bound_value\":0.5,"
          "\"verdict\":\"bound_holds\",\"runtime_s\":0,\"censored_fraction\":0}");

    r.bound_value.reset();
    r.verdict = Verdict::Informational;
    CHECK(report_json(r).find("\"bound_value\":null") != std::string::npos);
    CHECK(report_csv_row(r).find(",informational,") != std::string::npos);
    CHECK(report_csv_header() ==
          "estimate,stderr,ci_lo,ci_hi,bound_value,verdict,runtime_s,censored_fraction");
}

TEST_CASE("fnv1a is stable") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a("a") != fnv1a("b"));
}
