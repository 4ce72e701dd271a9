#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ioncosmo/fock.hpp"
#include "ioncosmo/ramp.hpp"
#include "ioncosmo/readout.hpp"

namespace ioncosmo {

enum class ScenarioKind { TrapSingleIon, TrapChain, Cosmology };

const char* scenario_kind_name(ScenarioKind kind);
ScenarioKind scenario_kind_from_name(const std::string& name);

struct StateConfig {
    bool thermal = false; // false: vacuum
    double mean_n = 0.0;
};

struct FockConfig {
    int n_max = 128;
    bool oracle = false; // cross-check populations with the truncated-basis run
};

struct ReadoutConfig {
    bool enabled = false;
    std::vector<char> sequences = {'a', 'b'}; // 'a': rsb2 first, 'b': rsb1 first
    PulseMode mode = PulseMode::IdealPi;
    double eta = 0.3;
    std::uint64_t trials = 0; // 0: probabilities only, no sampling
    double detection_efficiency = 1.0;
    int mode_index = 0; // which normal mode the detection addresses
};

struct IntegrationConfig {
    double rtol = 1e-10;
    double flat_tol = 1e-6;
    int n_samples = 257;
};

struct CosmologyRunConfig {
    double a_initial = 1.0;
    double a_final = 1.0;
    double rise_time = 1.0;
    RampShape shape = RampShape::Tanh;
    double head_hold = 0.0;
    double tail_hold = 0.0;
    double zeta = 0.0;
    double k_min = 0.1;
    double k_max = 10.0;
    int k_count = 33; // 16 per decade over two decades, endpoints included
    bool k_log = true;
    int ricci_samples = 8193;
};

struct SweepConfig {
    bool enabled = false;
    std::string parameter; // ramp.rise_time | ramp.omega_final | ramp.head_hold | ramp.tail_hold
    double min = 0.0;
    double max = 0.0;
    int count = 1;
    bool log_scale = false;
};

// Fully validated scenario description. All quantities are dimensionless; when
// the config file used physical units (Hz/kHz/MHz for frequencies as cycles,
// s/ms/us/ns for times) the conversion divides angular frequencies by
// frequency_unit = 2 pi * omega_initial-in-Hz and multiplies times by the
// same factor, and each conversion is recorded in unit_notes.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::TrapSingleIon;
    std::uint64_t seed = 1;

    TrapRamp ramp;
    int n_ions = 1;
    std::vector<int> mode_selection; // empty: all modes

    StateConfig state;
    FockConfig fock;
    ReadoutConfig readout;
    IntegrationConfig integration;
    CosmologyRunConfig cosmo;
    SweepConfig sweep;

    double frequency_unit = 0.0; // rad/s per dimensionless unit; 0: dimensionless input
    std::vector<std::string> unit_notes;
    std::uint64_t config_hash = 0;
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

// FNV-1a over the raw bytes; stable across platforms, used as the config hash.
std::uint64_t fnv1a64(const std::string& text);

} // namespace ioncosmo
