#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ioncosmo/config.hpp"
#include "ioncosmo/errors.hpp"
#include "ioncosmo/scenario.hpp"

using namespace ioncosmo;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return static_cast<ErrorCode>(0);
}

const OutputTable& table_named(const ScenarioResult& r, const std::string& name) {
    for (const OutputTable& t : r.tables)
        if (t.name == name) return t;
    REQUIRE_MESSAGE(false, ("missing table " + name));
    static OutputTable none;
    return none;
}

std::vector<std::string> split_row(const std::string& row) {
    std::vector<std::string> out;
    std::stringstream ss(row);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

double cell(const std::string& row, std::size_t col) {
    return std::stod(split_row(row).at(col));
}

std::string manifest_value(const ScenarioResult& r, const std::string& key) {
    for (const auto& [k, v] : r.manifest)
        if (k == key) return v;
    return "";
}

const std::string kStepConfig = R"([scenario]
kind = trap_single_ion
seed = 1

[ramp]
shape = step
omega_initial = 1
omega_final = 10
head_hold = 1
tail_hold = 1

[fock]
n_max = 64
)";

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.is_open());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("sudden-step scenario: tables carry the closed-form numbers") {
    ScenarioConfig cfg = parse_config(kStepConfig);
    CHECK(cfg.kind == ScenarioKind::TrapSingleIon);
    CHECK(cfg.config_hash == fnv1a64(kStepConfig));
    CHECK(cfg.frequency_unit == 0.0);
    CHECK(cfg.unit_notes.empty());

    ScenarioResult r = run_scenario(cfg);
    CHECK(manifest_value(r, "kind") == "trap_single_ion");
    CHECK(manifest_value(r, "command") == "run");
    CHECK(!manifest_value(r, "config_hash").empty());

    const OutputTable& bogo = table_named(r, "bogoliubov");
    REQUIRE(bogo.rows.size() == 1);
    CHECK(std::abs(cell(bogo.rows[0], 3) - 2.025) <= 1e-9);
    CHECK(std::abs(cell(bogo.rows[0], 4) - std::asinh(std::sqrt(2.025))) <= 1e-9);

    const OutputTable& pops = table_named(r, "populations");
    REQUIRE(pops.rows.size() == 65);
    CHECK(cell(pops.rows[0], 2) == 1.0); // vacuum in
    CHECK(std::abs(cell(pops.rows[0], 3) - 1.0 / std::sqrt(3.025)) <= 1e-9);

    const OutputTable& evo = table_named(r, "evolution");
    CHECK(evo.rows.size() == 257); // default sampling, one mode

    // Same config, same bytes out.
    ScenarioResult again = run_scenario(cfg);
    REQUIRE(again.tables.size() == r.tables.size());
    for (std::size_t i = 0; i < r.tables.size(); ++i) {
        CHECK(again.tables[i].header == r.tables[i].header);
        CHECK(again.tables[i].rows == r.tables[i].rows);
    }
}

TEST_CASE("physical units rescale to the initial trap frequency") {
    const std::string text = R"([scenario]
kind = trap_single_ion
seed = 1

[ramp]
shape = step
omega_initial = 200 kHz
omega_final = 2 MHz
head_hold = 5 us
tail_hold = 5 us

[fock]
n_max = 32
)";
    ScenarioConfig cfg = parse_config(text);
    CHECK(std::abs(cfg.frequency_unit - 2.0 * 3.14159265358979324 * 2.0e5) <= 1.0);
    CHECK(std::abs(cfg.ramp.omega_initial - 1.0) <= 1e-14);
    CHECK(std::abs(cfg.ramp.omega_final - 10.0) <= 1e-13);
    CHECK(std::abs(cfg.ramp.head_hold - 6.283185307179586) <= 1e-12);
    CHECK(!cfg.unit_notes.empty());

    // Particle creation depends only on the frequency ratio.
    ScenarioResult r = run_scenario(cfg);
    CHECK(std::abs(cell(table_named(r, "bogoliubov").rows[0], 3) - 2.025) <= 1e-9);
}

TEST_CASE("config rejections") {
    // Parse-level: malformed line, with its line number in the message.
    try {
        parse_config("[ramp]\nomega_initial\n");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Parse);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    auto bad = [](const std::string& text) {
        return code_of([&] { parse_config(text); });
    };
    CHECK(bad("[scenario]\nseed = 1\n") == ErrorCode::Validation); // kind missing
    CHECK(bad("[scenario]\nkind = trap_single_ion\n\n[ramp]\nshape = step\n"
              "omega_initial = 1\nomega_final = 2\nhead_hold = 1\n"
              "tail_hold = 1\nbogus = 3\n") == ErrorCode::Validation);
    CHECK(bad("[scenario]\nkind = trap_single_ion\nkind = cosmology\n") ==
          ErrorCode::Parse); // duplicate key
    CHECK(bad("[scenario]\nkind = trap_single_ion\nseed = -1\n\n[ramp]\n"
              "shape = step\nomega_initial = 1\nomega_final = 2\n"
              "head_hold = 1\ntail_hold = 1\n") == ErrorCode::Validation);
    CHECK(bad("[scenario]\nkind = trap_single_ion\n\n[ramp]\nshape = step\n"
              "omega_initial = 1\nomega_final = 2\nhead_hold = 1\n"
              "tail_hold = 1\n\n[state]\nkind = vacuum\n"
              "mean_n = 0.5\n") == ErrorCode::Validation);
    CHECK(bad("[scenario]\nkind = trap_single_ion\n\n[ramp]\nshape = step\n"
              "omega_initial = 1\nomega_final = 2\nhead_hold = 1\n"
              "tail_hold = 1\n\n[readout]\nenabled = true\n"
              "mode_index = 3\n") == ErrorCode::Validation);
    CHECK(bad("[scenario]\nkind = trap_single_ion\n\n[ramp]\nshape = step\n"
              "omega_initial = 1\nomega_final = 2\nhead_hold = 1\n"
              "tail_hold = 1\n\n[readout]\ntrials = 5\n") ==
          ErrorCode::Validation);
    // A step with no flat stretch on a side has no in or out state there.
    CHECK(bad("[scenario]\nkind = trap_single_ion\n\n[ramp]\nshape = step\n"
              "omega_initial = 1\nomega_final = 2\nhead_hold = 1\n") ==
          ErrorCode::Validation);
    CHECK(bad("[scenario]\nkind = cosmology\n\n[cosmology]\na_initial = 1\n"
              "a_final = 2\nshape = step\nk_min = 1\nk_max = 2\nk_count = 2\n") ==
          ErrorCode::Validation);
    // Mixed unitful and bare values.
    CHECK(bad("[scenario]\nkind = trap_single_ion\n\n[ramp]\nshape = step\n"
              "omega_initial = 200 kHz\nomega_final = 2\n") == ErrorCode::Validation);
    // A time key cannot carry a frequency unit.
    CHECK(bad("[scenario]\nkind = trap_single_ion\n\n[ramp]\nshape = tanh\n"
              "omega_initial = 200 kHz\nomega_final = 2 MHz\nrise_time = 1 kHz\n") ==
          ErrorCode::Validation);

    CHECK(code_of([] { load_config_file("/nonexistent/ioncosmo.cfg"); }) ==
          ErrorCode::Io);
}

TEST_CASE("thermal seed shows up in the initial populations") {
    const std::string text = R"([scenario]
kind = trap_single_ion
seed = 1

[ramp]
shape = step
omega_initial = 1
omega_final = 4
head_hold = 1
tail_hold = 1

[state]
kind = thermal
mean_n = 0.05

[fock]
n_max = 16
)";
    ScenarioResult r = run_scenario(parse_config(text));
    const OutputTable& pops = table_named(r, "populations");
    const double p0 = cell(pops.rows[0], 2);
    const double p1 = cell(pops.rows[1], 2);
    CHECK(std::abs(p0 - 1.0 / 1.05) <= 1e-12);
    CHECK(std::abs(p1 / p0 - 0.05 / 1.05) <= 1e-12);
}

TEST_CASE("the rigid chain mode reproduces the single-ion result") {
    const std::string chain_text = R"([scenario]
kind = trap_chain
seed = 3

[ramp]
shape = tanh
omega_initial = 1
omega_final = 2
rise_time = 10
head_hold = 2
tail_hold = 2

[chain]
n_ions = 3
modes = all

[integration]
flat_tol = 1e-3

[fock]
n_max = 32
)";
    const std::string single_text = R"([scenario]
kind = trap_single_ion
seed = 3

[ramp]
shape = tanh
omega_initial = 1
omega_final = 2
rise_time = 10
head_hold = 2
tail_hold = 2

[integration]
flat_tol = 1e-3

[fock]
n_max = 32
)";
    ScenarioResult chain = run_scenario(parse_config(chain_text));
    ScenarioResult single = run_scenario(parse_config(single_text));

    const OutputTable& cb = table_named(chain, "bogoliubov");
    const OutputTable& sb = table_named(single, "bogoliubov");
    REQUIRE(cb.rows.size() == 3);
    REQUIRE(sb.rows.size() == 1);

    // Mode 0 moves every ion together and never feels the Coulomb terms.
    CHECK(std::abs(cell(cb.rows[0], 3) - cell(sb.rows[0], 3)) <= 1e-12);

    // The stiffer modes start higher and end higher; creation stays tiny for
    // this slow ramp on every mode.
    for (const std::string& row : cb.rows) CHECK(cell(row, 3) < 1e-3);

    CHECK(manifest_value(chain, "n_ions") == "3");
    CHECK(!manifest_value(chain, "scale_energy_drift").empty());
}

TEST_CASE("mode selection restricts the report") {
    const std::string text = R"([scenario]
kind = trap_chain
seed = 1

[ramp]
shape = tanh
omega_initial = 1
omega_final = 2
rise_time = 10
head_hold = 2
tail_hold = 2

[chain]
n_ions = 3
modes = 0

[integration]
flat_tol = 1e-3

[fock]
n_max = 16
)";
    ScenarioResult r = run_scenario(parse_config(text));
    const OutputTable& bogo = table_named(r, "bogoliubov");
    REQUIRE(bogo.rows.size() == 1);
    CHECK(split_row(bogo.rows[0])[0] == "0");
}

TEST_CASE("static structure report") {
    const std::string text = R"([scenario]
kind = trap_chain
seed = 1

[ramp]
shape = tanh
omega_initial = 1
omega_final = 2
rise_time = 1

[chain]
n_ions = 3
)";
    ScenarioConfig cfg = parse_config(text);
    ScenarioResult r = run_modes(cfg);

    const OutputTable& eq = table_named(r, "equilibrium");
    REQUIRE(eq.rows.size() == 3);
    CHECK(std::abs(cell(eq.rows[0], 1) + 1.0772173450159419) <= 1e-10);
    CHECK(std::abs(cell(eq.rows[1], 1)) <= 1e-12);
    CHECK(std::abs(cell(eq.rows[2], 1) - 1.0772173450159419) <= 1e-10);

    const OutputTable& modes = table_named(r, "modes");
    REQUIRE(modes.rows.size() == 9);
    CHECK(std::abs(cell(modes.rows[0], 1) - 0.0) <= 1e-10); // kappa = 0
    CHECK(std::abs(cell(modes.rows[3], 1) - 2.0) <= 1e-10); // kappa = 1
    CHECK(std::abs(cell(modes.rows[6], 1) - 4.8) <= 1e-10); // kappa = 2

    ScenarioConfig cosmo = parse_config(
        "[scenario]\nkind = cosmology\n\n[cosmology]\na_initial = 1\n"
        "a_final = 2\nshape = step\nhead_hold = 1\ntail_hold = 1\n"
        "k_min = 0.5\nk_max = 2\nk_count = 3\n");
    CHECK(code_of([&] { run_modes(cosmo); }) == ErrorCode::Validation);
}

TEST_CASE("expansion scenario emits the spectrum table") {
    ScenarioConfig cfg = parse_config(
        "[scenario]\nkind = cosmology\n\n[cosmology]\na_initial = 1\n"
        "a_final = 2\nshape = step\nhead_hold = 1\ntail_hold = 1\n"
        "k_min = 0.5\nk_max = 2\nk_count = 3\n");
    ScenarioResult r = run_scenario(cfg);
    const OutputTable& spec = table_named(r, "cosmo_spectrum");
    REQUIRE(spec.rows.size() == 3);
    for (const std::string& row : spec.rows)
        CHECK(std::abs(cell(row, 2) - 0.5625) <= 1e-12);
    CHECK(manifest_value(r, "a_final") == "2");
}

TEST_CASE("rise-time sweep slows particle creation down") {
    const std::string text = R"([scenario]
kind = trap_single_ion
seed = 1

[ramp]
shape = tanh
omega_initial = 1
omega_final = 10
rise_time = 1
head_hold = 1
tail_hold = 1

[sweep]
parameter = ramp.rise_time
min = 0.1
max = 5
count = 5
scale = log
)";
    ScenarioResult r = run_sweep(parse_config(text));
    const OutputTable& sweep = table_named(r, "sweep");
    REQUIRE(sweep.rows.size() == 5);
    double prev_value = 0.0;
    double prev_n = 1e300;
    for (const std::string& row : sweep.rows) {
        const double value = cell(row, 1);
        const double n = cell(row, 2);
        CHECK(value > prev_value);
        CHECK(n <= prev_n);
        prev_value = value;
        prev_n = n;
    }
    CHECK(cell(sweep.rows[0], 2) > 100.0 * cell(sweep.rows[4], 2));
    CHECK(manifest_value(r, "sweep_parameter") == "ramp.rise_time");

    // No [sweep] section, wrong kind: both refused.
    CHECK(code_of([&] { run_sweep(parse_config(kStepConfig)); }) ==
          ErrorCode::Validation);
}

TEST_CASE("readout table agrees with the populations table") {
    const std::string text = R"([scenario]
kind = trap_single_ion
seed = 11

[ramp]
shape = step
omega_initial = 1
omega_final = 4
head_hold = 1
tail_hold = 1

[fock]
n_max = 32

[readout]
enabled = true
sequences = acd, bcd
mode = ideal_pi
eta = 0.3
trials = 0
)";
    ScenarioResult r = run_scenario(parse_config(text));
    const OutputTable& rt = table_named(r, "readout");
    REQUIRE(rt.rows.size() == 2);
    CHECK(split_row(rt.rows[0])[0] == "acd");
    CHECK(split_row(rt.rows[1])[0] == "bcd");

    const OutputTable& pops = table_named(r, "populations");
    const double p2_final = cell(pops.rows[2], 3);
    CHECK(cell(rt.rows[0], 1) == p2_final);
    CHECK(cell(rt.rows[1], 1) == 0.0); // squeezed vacuum: no odd levels
    // |xi| = ln 2 for this jump, so P(2) = 0.8 * 0.5 * tanh^2(ln 2).
    CHECK(std::abs(p2_final - 0.144) <= 1e-12);

    // Sampling is pinned to the config seed.
    std::string sampled = text;
    sampled.replace(sampled.find("trials = 0"), 10, "trials = 400");
    ScenarioResult s1 = run_scenario(parse_config(sampled));
    ScenarioResult s2 = run_scenario(parse_config(sampled));
    CHECK(table_named(s1, "readout").rows == table_named(s2, "readout").rows);
    CHECK(split_row(table_named(s1, "readout").rows[0])[3] != "0");
}

TEST_CASE("written files are byte-stable and newline-terminated") {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "ioncosmo_scenario_io";
    fs::remove_all(base);

    ScenarioConfig cfg = parse_config(kStepConfig);
    write_result(run_scenario(cfg), (base / "one").string());
    write_result(run_scenario(cfg), (base / "two").string());

    for (const char* name :
         {"evolution.csv", "bogoliubov.csv", "populations.csv", "manifest.txt"}) {
        const std::string a = read_file(base / "one" / name);
        const std::string b = read_file(base / "two" / name);
        CHECK(a == b);
        CHECK(!a.empty());
        CHECK(a.back() == '\n');
    }
    const std::string bogo = read_file(base / "one" / "bogoliubov.csv");
    CHECK(bogo.rfind("mode,abs_alpha,abs_beta,n_created,abs_xi\n", 0) == 0);

    fs::remove_all(base);
}

TEST_CASE("number formatting round-trips exactly") {
    for (double v : {1.0 / 3.0, 2.025, 0.0, -1.2566370614359172e6, 1e-300}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(2.025) == "2.025");
    CHECK(format_double(0.0) == "0");
}
