#include "nr/verify.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nr/errors.hpp"
#include "nr/bounds.hpp"
#include "nr/version.hpp"

namespace nr {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            throw config_error("unknown key '" + it.key() + "' in " + where);
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key))
        throw config_error("missing key '" + key + "' in " + where);
    if (!obj[key].is_number())
        throw config_error("key '" + key + "' in " + where + " must be a number");
    return obj[key].get<double>();
}

std::uint64_t require_count(const json& obj, const std::string& key,
                            const std::string& where) {
    double v = require_number(obj, key, where);
    if (v < 0 || v != std::floor(v))
        throw config_error("key '" + key + "' in " + where +
                           " must be a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

Distribution parse_distribution(const json& e, const std::string& where) {
    double tau = require_number(e, "tau", where);
    if (!e.contains("c_f")) return Distribution::pareto_critical(tau);
    if (e["c_f"].is_string()) {
        if (e["c_f"].get<std::string>() != "critical")
            throw config_error("key 'c_f' in " + where +
                               " must be a number or \"critical\"");
        return Distribution::pareto_critical(tau);
    }
    if (!e["c_f"].is_number())
        throw config_error("key 'c_f' in " + where + " must be a number or \"critical\"");
    return Distribution::pareto(tau, e["c_f"].get<double>());
}

WalkConfig parse_walk_config(const json& e, double tau, std::uint64_t n,
                             std::int64_t window, const std::string& where) {
    double omega = e.contains("omega") ? require_number(e, "omega", where) : 2.0;
    double delta = e.contains("delta") ? require_number(e, "delta", where) : 0.1;
    WalkConfig cfg = default_walk_config(tau, n, window, omega, delta);
    if (e.contains("barrier"))
        cfg.barrier = static_cast<std::int64_t>(require_count(e, "barrier", where));
    if (e.contains("horizon"))
        cfg.horizon = static_cast<std::int64_t>(require_count(e, "horizon", where));
    cfg.validate();
    return cfg;
}

NamedExperiment parse_experiment(const json& e, std::uint64_t default_seed,
                                 std::size_t index) {
    if (!e.is_object())
        throw config_error("experiments[" + std::to_string(index) + "] must be an object");
    std::string name = e.contains("name") ? e["name"].get<std::string>()
                                          : "experiment-" + std::to_string(index);
    std::string where = "experiment '" + name + "'";

    static const std::set<std::string> base_keys = {
        "name",    "quantity", "tau",    "c_f",     "n",       "replicates",
        "seed",    "omega",    "delta",  "k",       "barrier", "horizon",
        "window",  "k_max",    "cap",    "threshold", "method",
        "dominate_first_step"};
    reject_unknown_keys(e, base_keys, where);

    if (!e.contains("quantity") || !e["quantity"].is_string())
        throw config_error("missing string key 'quantity' in " + where);
    std::string quantity = e["quantity"].get<std::string>();

    Distribution dist = parse_distribution(e, where);
    double tau = dist.pareto_law()->tau;
    std::uint64_t n = require_count(e, "n", where);
    std::uint64_t replicates =
        e.contains("replicates") ? require_count(e, "replicates", where) : 1;
    std::uint64_t seed = e.contains("seed") ? require_count(e, "seed", where) : default_seed;

    double threshold =
        e.contains("threshold") ? require_number(e, "threshold", where) : 0.02;

    Quantity q = [&]() -> Quantity {
        if (quantity == "cmax_tail")
            return CmaxTail{require_number(e, "omega", where)};
        if (quantity == "cluster_tail")
            return ClusterTail{require_count(e, "k", where)};
        if (quantity == "walk_positivity") {
            std::int64_t window = static_cast<std::int64_t>(require_count(e, "window", where));
            bool dom = true;
            if (e.contains("dominate_first_step")) {
                if (!e["dominate_first_step"].is_boolean())
                    throw config_error("'dominate_first_step' in " + where +
                                       " must be boolean");
                dom = e["dominate_first_step"].get<bool>();
            }
            return WalkPositivity{parse_walk_config(e, tau, n, window, where), dom};
        }
        if (quantity == "stop_time_mean") {
            std::int64_t window =
                e.contains("window")
                    ? static_cast<std::int64_t>(require_count(e, "window", where))
                    : 1;
            return StopTimeMean{parse_walk_config(e, tau, n, window, where)};
        }
        if (quantity == "overshoot_tail") {
            std::size_t k_max =
                e.contains("k_max") ? static_cast<std::size_t>(require_count(e, "k_max", where))
                                    : 10;
            return OvershootTail{parse_walk_config(e, tau, n, 1, where), k_max};
        }
        if (quantity == "bp_coupling_tv") {
            std::uint64_t cap = e.contains("cap") ? require_count(e, "cap", where) : 0;
            return BpCouplingTv{cap, threshold};
        }
        if (quantity == "degree_tv") {
            std::size_t k_max =
                e.contains("k_max") ? static_cast<std::size_t>(require_count(e, "k_max", where))
                                    : 50;
            return DegreeTv{k_max, threshold};
        }
        if (quantity == "graph_law_tv") {
            SampleMethod method = SampleMethod::PoissonCollapse;
            if (e.contains("method")) {
                std::string m = e["method"].get<std::string>();
                if (m == "naive")
                    method = SampleMethod::Naive;
                else if (m == "poisson")
                    method = SampleMethod::PoissonCollapse;
                else
                    throw config_error("'method' in " + where +
                                       " must be \"naive\" or \"poisson\"");
            }
            return GraphLawTv{method, threshold};
        }
        throw config_error("unknown quantity '" + quantity + "' in " + where);
    }();

    return NamedExperiment{name, Experiment{std::move(dist), n, replicates, q, seed}};
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw config_error(std::string("config parse error: ") + err.what());
    }
    if (!root.is_object()) throw config_error("config root must be a JSON object");
    reject_unknown_keys(root, {"seed", "workers", "output_dir", "format", "experiments"},
                        "config root");

    RunConfig cfg;
    if (root.contains("seed")) cfg.seed = require_count(root, "seed", "config root");
    if (root.contains("workers"))
        cfg.workers = static_cast<int>(require_count(root, "workers", "config root"));
    if (root.contains("output_dir")) {
        if (!root["output_dir"].is_string())
            throw config_error("'output_dir' must be a string");
        cfg.output_dir = root["output_dir"].get<std::string>();
    }
    if (root.contains("format")) {
        if (!root["format"].is_string())
            throw config_error("'format' must be a string");
        cfg.format = root["format"].get<std::string>();
        if (cfg.format != "json" && cfg.format != "csv")
            throw config_error("'format' must be \"json\" or \"csv\"");
    }
    if (!root.contains("experiments") || !root["experiments"].is_array() ||
        root["experiments"].empty())
        throw config_error("config needs a non-empty 'experiments' array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < root["experiments"].size(); ++i) {
        NamedExperiment ne = parse_experiment(root["experiments"][i], cfg.seed, i);
        if (!names.insert(ne.name).second)
            throw config_error("duplicate experiment name '" + ne.name + "'");
        cfg.experiments.push_back(std::move(ne));
    }
    return cfg;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os << content;
        if (!os) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string manifest_json(std::uint64_t config_hash, std::uint64_t seed,
                          const std::vector<std::pair<std::string, std::uint64_t>>& outputs) {
    nlohmann::json m;
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config_hash));
    m["config_hash"] = hex;
    m["seed"] = seed;
    m["version"] = kVersion;
    m["outputs"] = nlohmann::json::array();
    for (const auto& [file, digest] : outputs) {
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(digest));
        m["outputs"].push_back({{"file", file}, {"digest", hex}});
    }
    return m.dump(2) + "\n";
}

VerifyOutcome run_verify(const RunConfig& cfg, const std::string& config_bytes) {
    namespace fs = std::filesystem;
    VerifyOutcome out;
    out.exit_code = 0;
    // reject anything invalid or oversized before any experiment runs
    for (const auto& ne : cfg.experiments) validate_experiment(ne.experiment);
    fs::create_directories(cfg.output_dir);

    std::vector<std::pair<std::string, std::uint64_t>> manifest_entries;
    for (const auto& ne : cfg.experiments) {
        McReport rep = run_experiment(ne.experiment, cfg.workers);
        std::string body, file;
        if (cfg.format == "csv") {
            body = report_csv_header() + "\n" + report_csv_row(rep) + "\n";
            file = ne.name + ".report.csv";
        } else {
            body = report_json(rep) + "\n";
            file = ne.name + ".report.json";
        }
        atomic_write_file((fs::path(cfg.output_dir) / file).string(), body);
        manifest_entries.emplace_back(file, fnv1a(canonical_report_json(rep)));
        if (rep.verdict == Verdict::BoundViolated || rep.verdict == Verdict::Vacuous)
            out.exit_code = 1;
        out.reports.emplace_back(ne.name, rep);
    }
    atomic_write_file((fs::path(cfg.output_dir) / "manifest.json").string(),
                      manifest_json(fnv1a(config_bytes), cfg.seed, manifest_entries));
    return out;
}

}  // namespace nr
