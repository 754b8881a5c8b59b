#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdl/channels.hpp"
#include "mdl/simkit.hpp"

namespace mdl {

struct GridSpec {
    double start_db = 0.0;
    double stop_db = 0.0;
    double step_db = 1.0;
    std::vector<double> points() const;
};

/// One experiment as described by a JSON spec file. Commands use the subset
/// of fields they need; loading validates only that subset.
struct ExperimentSpec {
    SystemConfig config;
    GridSpec grid;
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 1;
    std::uint64_t min_hits = 0;   // optional per-point extension target
    std::uint64_t max_trials = 0; // ceiling for the extension
    double window_lo_db = 0.0;
    double window_hi_db = 0.0;
    double tolerance = 0.0;
    std::optional<long> predicted;
    std::string csv;    // slope: input sweep CSV (default <out>/sweep.csv)
    std::string figure; // figure: recipe name fig1..fig5
    bool has_config = false;
};

/// Parses and validates a spec file for one command. Throws config_error
/// naming the missing or malformed field.
ExperimentSpec load_spec(const std::string& path, const std::string& command);

void write_text_atomic(const std::string& path, const std::string& content);
std::string sweep_csv_text(const SweepResult& sweep);
void write_sweep_csv(const std::string& path, const SweepResult& sweep);
void write_sweep_json(const std::string& path, const SweepResult& sweep);

/// Reads a sweep back from its CSV (points only; config stays default).
SweepResult read_sweep_csv(const std::string& path);

/// Executes one CLI command. Returns the process exit code: 0 on success,
/// 3 when a verification suite reports violations. Validation problems
/// throw config_error (exit 1), numeric failures throw (exit 2).
int run_command(const std::string& command, const std::string& spec_path,
                const std::string& out_dir, int threads,
                std::optional<std::uint64_t> seed_override);

} // namespace mdl
