#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nr/mc.hpp"

namespace nr {

struct NamedExperiment {
    std::string name;
    Experiment experiment;
};

struct RunConfig {
    std::uint64_t seed = 42;
    int workers = 0;  // 0 = hardware
    std::string output_dir = ".";
    std::string format = "json";  // "json" or "csv"
    std::vector<NamedExperiment> experiments;
};

// Strict parse: unknown keys anywhere are rejected with the offending field
// named; JSON syntax errors carry the parser's position diagnostics. Throws
// config_error.
RunConfig parse_run_config(const std::string& json_text);

struct VerifyOutcome {
    int exit_code;  // 0 ok, 1 some bound violated or vacuous
    std::vector<std::pair<std::string, McReport>> reports;
};

// Runs every experiment, writes one report file per experiment plus a
// manifest into cfg.output_dir (all writes are temp-file + rename), and
// returns exit code 0 iff every non-informational verdict is bound_holds.
// `config_bytes` is hashed into the manifest.
VerifyOutcome run_verify(const RunConfig& cfg, const std::string& config_bytes);

// Atomically write `content` to `path` (temp file in the same directory,
// then rename).
void atomic_write_file(const std::string& path, const std::string& content);

// Small manifest JSON used by every file-producing command: config-equivalent
// description, seed, version, and a digest per output file.
std::string manifest_json(std::uint64_t config_hash, std::uint64_t seed,
                          const std::vector<std::pair<std::string, std::uint64_t>>& outputs);

}  // namespace nr
