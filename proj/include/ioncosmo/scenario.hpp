#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ioncosmo/config.hpp"

namespace ioncosmo {

// One CSV table produced by a scenario run. Rows are pre-rendered so that
// writing is a plain byte copy; repeated runs with the same config and seed
// produce identical files.
struct OutputTable {
    std::string name;   // file stem; written as <name>.csv
    std::string header; // comma-separated column names
    std::vector<std::string> rows;
};

struct ScenarioResult {
    std::vector<OutputTable> tables;
    std::vector<std::pair<std::string, std::string>> manifest; // ordered key/value
    std::string summary; // short digest for the terminal
};

// Static structure only: equilibrium positions and normal modes.
// Trap scenarios only.
ScenarioResult run_modes(const ScenarioConfig& cfg);

// Full scenario dispatch on cfg.kind. Trap kinds produce evolution,
// bogoliubov and populations tables (plus readout and the truncated-basis
// cross-check when enabled); cosmology produces the spectrum table.
// command labels the manifest entry; the behaviour does not depend on it.
ScenarioResult run_scenario(const ScenarioConfig& cfg,
                            const std::string& command = "run");

// One-parameter sweep over the single-ion ramp; needs an enabled [sweep]
// section (kind trap_single_ion only).
ScenarioResult run_sweep(const ScenarioConfig& cfg);

// Creates out_dir if needed and writes <name>.csv per table plus
// manifest.txt. All files use \n line endings regardless of platform.
void write_result(const ScenarioResult& result, const std::string& out_dir);

// The one number formatting used in every table: shortest round-trippable
// decimal via %.17g.
std::string format_double(double v);

} // namespace ioncosmo
