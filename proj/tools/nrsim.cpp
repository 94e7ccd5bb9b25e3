// nrsim: sample critical rank-1 random graphs, explore their components,
// run the dominating-walk apparatus, and verify tail bounds by Monte Carlo.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nr/bounds.hpp"
#include "nr/bp.hpp"
#include "nr/dist.hpp"
#include "nr/errors.hpp"
#include "nr/explore.hpp"
#include "nr/mc.hpp"
#include "nr/oracle.hpp"
#include "nr/sampler.hpp"
#include "nr/verify.hpp"
#include "nr/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBoundViolated = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitResourceRefusal = 3;

struct DistOptions {
    double tau = 3.5;
    std::string c_f = "critical";

    nr::Distribution build() const {
        if (c_f == "critical") return nr::Distribution::pareto_critical(tau);
        return nr::Distribution::pareto(tau, std::stod(c_f));
    }

    std::string describe() const { return "tau=" + std::to_string(tau) + ",c_f=" + c_f; }
};

void add_dist_options(CLI::App* cmd, DistOptions& d) {
    cmd->add_option("--tau", d.tau, "tail exponent (> 3)")->required();
    cmd->add_option("--c-f", d.c_f, "tail constant, or \"critical\" to calibrate nu = 1");
}

// every file-producing run also emits <out>.manifest.json so the output can
// be regenerated byte-for-byte
void emit_with_manifest(const std::string& out, const std::string& content,
                        const std::string& config_desc, std::uint64_t seed) {
    nr::atomic_write_file(out, content);
    nr::atomic_write_file(
        out + ".manifest.json",
        nr::manifest_json(nr::fnv1a(config_desc), seed, {{out, nr::fnv1a(content)}}));
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw nr::config_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int run(int argc, char** argv) {
    CLI::App app{"critical rank-1 inhomogeneous random graph toolkit"};
    app.set_version_flag("--version", nr::kVersion);
    app.require_subcommand(1);

    std::uint64_t seed = 42;
    app.add_option("--seed", seed, "master seed (all randomness derives from it)")
        ->capture_default_str();

    // ---- weights ----
    auto* c_weights = app.add_subcommand("weights", "write the weight sequence as CSV");
    DistOptions wd;
    std::uint64_t w_n = 0;
    std::string w_out = "weights.csv";
    add_dist_options(c_weights, wd);
    c_weights->add_option("--n", w_n, "number of vertices (>= 2)")->required();
    c_weights->add_option("--out", w_out, "output CSV path")->capture_default_str();

    // ---- sample ----
    auto* c_sample = app.add_subcommand("sample", "sample one graph and write its edges");
    DistOptions sd;
    std::uint64_t s_n = 0;
    std::string s_method = "poisson";
    std::string s_out = "edges.csv";
    std::string s_format = "csv";
    bool s_allow_large = false;
    add_dist_options(c_sample, sd);
    c_sample->add_option("--n", s_n, "number of vertices")->required();
    c_sample->add_option("--method", s_method, "naive | poisson")->capture_default_str();
    c_sample->add_option("--format", s_format, "csv | nrg1")->capture_default_str();
    c_sample->add_option("--out", s_out, "output path")->capture_default_str();
    c_sample->add_flag("--allow-large", s_allow_large,
                       "lift the n <= 10^4 guard on the naive sampler");

    // ---- components ----
    auto* c_comp = app.add_subcommand("components", "component sizes of a stored graph");
    std::string comp_in, comp_out = "components.csv";
    c_comp->add_option("--in", comp_in, "edge file (.csv or .nrg1)")->required();
    c_comp->add_option("--out", comp_out, "output CSV path")->capture_default_str();

    // ---- bp ----
    auto* c_bp = app.add_subcommand("bp", "one thinned branching exploration trace");
    DistOptions bd;
    std::uint64_t b_n = 0, b_cap = 0;
    std::string b_out = "bp.csv";
    add_dist_options(c_bp, bd);
    c_bp->add_option("--n", b_n, "mark-space size")->required();
    c_bp->add_option("--cap", b_cap, "censoring cap (0 = 10n)")->capture_default_str();
    c_bp->add_option("--out", b_out, "output CSV path")->capture_default_str();

    // ---- walk ----
    auto* c_walk = app.add_subcommand("walk", "one stopped dominating-walk path");
    DistOptions kd;
    std::uint64_t k_n = 0;
    std::int64_t k_barrier = 0, k_horizon = 0, k_window = 1;
    std::string k_out = "walk.csv";
    add_dist_options(c_walk, kd);
    c_walk->add_option("--n", k_n, "mark-space size")->required();
    c_walk->add_option("--barrier", k_barrier, "upper absorbing level (0 = default)");
    c_walk->add_option("--horizon", k_horizon, "hard stopping time (0 = default)");
    c_walk->add_option("--window", k_window, "positivity window")->capture_default_str();
    c_walk->add_option("--out", k_out, "output CSV path")->capture_default_str();

    // ---- bounds ----
    auto* c_bounds = app.add_subcommand("bounds", "closed-form bound table rows");
    DistOptions dd;
    std::uint64_t d_n = 0;
    double d_omega = 2.0;
    std::int64_t d_barrier = 0, d_horizon = 0, d_window = 1;
    std::string d_out = "bounds.csv";
    add_dist_options(c_bounds, dd);
    c_bounds->add_option("--n", d_n, "number of vertices")->required();
    c_bounds->add_option("--omega", d_omega, "window width multiplier")->capture_default_str();
    c_bounds->add_option("--barrier", d_barrier, "walk barrier (0 = default)");
    c_bounds->add_option("--horizon", d_horizon, "walk horizon (0 = default)");
    c_bounds->add_option("--window", d_window, "tail length k")->capture_default_str();
    c_bounds->add_option("--out", d_out, "output CSV path")->capture_default_str();

    // ---- oracle ----
    auto* c_oracle = app.add_subcommand("oracle", "exact component laws at n <= 6");
    DistOptions od;
    std::uint64_t o_n = 0;
    std::string o_out_cmax = "law_cmax.csv", o_out_cv = "law_cluster.csv";
    add_dist_options(c_oracle, od);
    c_oracle->add_option("--n", o_n, "number of vertices (<= 6)")->required();
    c_oracle->add_option("--out-cmax", o_out_cmax, "largest-component law CSV")
        ->capture_default_str();
    c_oracle->add_option("--out-cluster", o_out_cv, "random-vertex cluster law CSV")
        ->capture_default_str();

    // ---- verify ----
    auto* c_verify = app.add_subcommand("verify", "run a JSON experiment config");
    std::string v_config;
    std::string v_outdir;
    int v_workers = -1;
    c_verify->add_option("--config", v_config, "experiment config JSON")->required();
    c_verify->add_option("--out-dir", v_outdir, "override the config's output_dir");
    c_verify->add_option("--workers", v_workers, "override worker count");

    CLI11_PARSE(app, argc, argv);

    if (c_weights->parsed()) {
        nr::WeightSequence ws = nr::WeightSequence::build(wd.build(), w_n);
        std::ostringstream os;
        nr::write_weights_csv(os, ws);
        emit_with_manifest(w_out, os.str(),
                           "weights:" + wd.describe() + ",n=" + std::to_string(w_n), seed);
        std::cout << "wrote " << w_out << " (n=" << w_n << ", total=" << ws.total()
                  << ", nu_n=" << ws.nu_n() << ")\n";
        return kExitOk;
    }

    if (c_sample->parsed()) {
        nr::WeightSequence ws = nr::WeightSequence::build(sd.build(), s_n);
        nr::GraphSample g;
        if (s_method == "naive")
            g = nr::sample_naive(ws, nr::RngStream(seed, 0), s_allow_large);
        else if (s_method == "poisson")
            g = nr::sample_poisson_collapse(ws, nr::RngStream(seed, 0));
        else
            throw nr::config_error("--method must be naive or poisson");
        std::ostringstream os;
        if (s_format == "csv")
            nr::write_edges_csv(os, g);
        else if (s_format == "nrg1")
            nr::write_edges_binary(os, g);
        else
            throw nr::config_error("--format must be csv or nrg1");
        emit_with_manifest(s_out, os.str(),
                           "sample:" + sd.describe() + ",n=" + std::to_string(s_n) +
                               ",method=" + s_method,
                           seed);
        std::cout << "wrote " << s_out << " (" << g.edge_count() << " edges)\n";
        return kExitOk;
    }

    if (c_comp->parsed()) {
        std::string bytes = slurp(comp_in);
        std::istringstream is(bytes);
        nr::GraphSample g = bytes.rfind("NRG1", 0) == 0 ? nr::read_edges_binary(is)
                                                        : nr::read_edges_csv(is);
        nr::ComponentSummary cs = nr::components_union_find(g);
        std::ostringstream os;
        nr::write_component_csv(os, cs);
        emit_with_manifest(comp_out, os.str(), "components:" + comp_in, seed);
        std::cout << "n=" << g.n << " components=" << cs.sizes.size()
                  << " c_max=" << cs.c_max() << "\n";
        return kExitOk;
    }

    if (c_bp->parsed()) {
        nr::WeightSequence ws = nr::WeightSequence::build(bd.build(), b_n);
        nr::MarkSampler marks(ws);
        nr::RngStream rng(seed, 0);
        nr::BpTrace t =
            nr::run_marked_bp(ws, marks, rng, b_cap == 0 ? 10 * b_n : b_cap, true);
        std::ostringstream os;
        nr::write_bp_csv(os, t);
        emit_with_manifest(b_out, os.str(),
                           "bp:" + bd.describe() + ",n=" + std::to_string(b_n), seed);
        std::cout << "explored=" << t.explored << (t.censored ? " (censored)" : "")
                  << "\n";
        return kExitOk;
    }

    if (c_walk->parsed()) {
        nr::WeightSequence ws = nr::WeightSequence::build(kd.build(), k_n);
        nr::MarkSampler marks(ws);
        nr::WalkConfig cfg = nr::default_walk_config(kd.tau, k_n, k_window);
        if (k_barrier > 0) cfg.barrier = k_barrier;
        if (k_horizon > 0) cfg.horizon = k_horizon;
        cfg.validate();
        nr::RngStream rng(seed, 0);
        nr::WalkPath p = nr::run_walk(ws, marks, cfg, rng, true, true);
        std::ostringstream os;
        nr::write_walk_csv(os, p);
        emit_with_manifest(k_out, os.str(),
                           "walk:" + kd.describe() + ",n=" + std::to_string(k_n), seed);
        std::cout << "stop_time=" << p.stop_time << " stop_value=" << p.stop_value
                  << " positive_in_window=" << (p.positive_in_window ? "yes" : "no")
                  << "\n";
        return kExitOk;
    }

    if (c_bounds->parsed()) {
        nr::Distribution dist = dd.build();
        nr::WeightSequence ws = nr::WeightSequence::build(dist, d_n);
        nr::WalkConfig cfg = nr::default_walk_config(dd.tau, d_n, d_window, d_omega);
        if (d_barrier > 0) cfg.barrier = d_barrier;
        if (d_horizon > 0) cfg.horizon = d_horizon;
        cfg.validate();
        nr::WalkDiagnostics diag = nr::walk_diagnostics(ws, cfg);
        std::vector<nr::BoundRow> rows;
        auto stop_bound = nr::expected_stop_upper(diag);
        rows.push_back({d_n, dd.tau, d_omega, cfg.barrier, cfg.horizon,
                        static_cast<std::uint64_t>(cfg.window),
                        stop_bound ? *stop_bound : std::numeric_limits<double>::infinity(),
                        "expected_stop_upper"});
        if (stop_bound)
            rows.push_back({d_n, dd.tau, d_omega, cfg.barrier, cfg.horizon,
                            static_cast<std::uint64_t>(cfg.window),
                            nr::cluster_tail_upper(diag, *stop_bound),
                            "cluster_tail_upper"});
        if (dd.tau > 4.0)
            rows.push_back({d_n, dd.tau, d_omega, cfg.barrier, cfg.horizon,
                            static_cast<std::uint64_t>(cfg.window),
                            nr::cmax_tail_leading_bound(dist.moments(), dd.tau, d_omega).value,
                            "cmax_tail_leading_bound"});
        else
            // the regime's constant has no closed form: the row carries the
            // event threshold in k and no bound value
            rows.push_back({d_n, dd.tau, d_omega, cfg.barrier, cfg.horizon,
                            nr::cmax_tail_threshold(d_n, dd.tau, d_omega),
                            std::numeric_limits<double>::quiet_NaN(),
                            "cmax_tail_threshold"});
        std::ostringstream os;
        nr::write_bound_csv(os, rows);
        emit_with_manifest(d_out, os.str(),
                           "bounds:" + dd.describe() + ",n=" + std::to_string(d_n), seed);
        std::cout << "wrote " << d_out << " (" << rows.size() << " rows)\n";
        return kExitOk;
    }

    if (c_oracle->parsed()) {
        nr::WeightSequence ws = nr::WeightSequence::build(od.build(), o_n);
        nr::ComponentLaws laws = nr::exact_component_laws(ws);
        std::ostringstream os1, os2;
        nr::write_law_csv(os1, laws.c_max);
        nr::write_law_csv(os2, laws.random_cluster);
        std::string desc = "oracle:" + od.describe() + ",n=" + std::to_string(o_n);
        nr::atomic_write_file(o_out_cmax, os1.str());
        nr::atomic_write_file(o_out_cv, os2.str());
        nr::atomic_write_file(
            o_out_cmax + ".manifest.json",
            nr::manifest_json(nr::fnv1a(desc), seed,
                              {{o_out_cmax, nr::fnv1a(os1.str())},
                               {o_out_cv, nr::fnv1a(os2.str())}}));
        std::cout << "wrote " << o_out_cmax << " and " << o_out_cv << "\n";
        return kExitOk;
    }

    if (c_verify->parsed()) {
        std::string bytes = slurp(v_config);
        nr::RunConfig cfg = nr::parse_run_config(bytes);
        if (!v_outdir.empty()) cfg.output_dir = v_outdir;
        if (v_workers >= 0) cfg.workers = v_workers;
        if (const char* env = std::getenv("NR_WORKERS"))
            cfg.workers = std::atoi(env);
        nr::VerifyOutcome out = nr::run_verify(cfg, bytes);
        for (const auto& [name, rep] : out.reports)
            std::cout << name << ": " << nr::verdict_name(rep.verdict)
                      << " estimate=" << rep.estimate
                      << (rep.bound_value ? " bound=" + std::to_string(*rep.bound_value)
                                          : std::string())
                      << "\n";
        return out.exit_code == 0 ? kExitOk : kExitBoundViolated;
    }

    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const nr::resource_error& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitResourceRefusal;
    } catch (const nr::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}
