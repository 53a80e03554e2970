#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace eplab::cli {

inline constexpr double kCliPoleGuard = 1e-6;

struct RunOptions {
    int workers = 1;
    bool pole_guard = true;
};

// Everything one command produces. Files are named <command>.csv, <command>.meta.jsonl and,
// for simulate, <command>_summary.csv.
struct CommandOutput {
    Table table;
    Table summary;
    std::vector<nlohmann::json> meta;
};

// Runs a command over every sweep point (or the single configured point) and assembles the output.
CommandOutput run_command(const std::string& command, const RunConfig& cfg, const RunOptions& opt);

// Runs and writes the files under cfg's output.dir; returns the CSV path.
std::string run_and_write(const std::string& command, const RunConfig& cfg, const RunOptions& opt);

// Frequency scale of the pole guard: gamma for Markovian models, 1/tau for loops.
double pole_scale(const RunConfig& cfg);
// Real resonances of the configured model (empty when none lie on the real axis).
std::vector<double> real_resonances(const RunConfig& cfg);

}  // namespace eplab::cli
