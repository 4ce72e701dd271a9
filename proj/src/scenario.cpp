#include "ioncosmo/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <sstream>

#include "ioncosmo/chain.hpp"
#include "ioncosmo/classical.hpp"
#include "ioncosmo/cosmo.hpp"
#include "ioncosmo/errors.hpp"
#include "ioncosmo/modeqn.hpp"
#include "ioncosmo/readout.hpp"
#include "ioncosmo/version.hpp"

namespace ioncosmo {

namespace {

constexpr double kOracleTol = 1e-6;

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::vector<int> selected_modes(const ScenarioConfig& cfg, int n_modes) {
    if (cfg.mode_selection.empty()) {
        std::vector<int> all(static_cast<std::size_t>(n_modes));
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    for (int kappa : cfg.mode_selection)
        require(kappa >= 0 && kappa < n_modes, ErrorCode::Validation,
                "mode selection index " + std::to_string(kappa) +
                    " out of range for " + std::to_string(n_modes) + " modes");
    return cfg.mode_selection;
}

ModeIntegrationOptions mode_options(const ScenarioConfig& cfg) {
    ModeIntegrationOptions opt;
    opt.rtol = cfg.integration.rtol;
    opt.flat_tol = cfg.integration.flat_tol;
    opt.n_samples = cfg.integration.n_samples;
    return opt;
}

void begin_manifest(ScenarioResult& r, const ScenarioConfig& cfg,
                    const std::string& command) {
    r.manifest.emplace_back("tool", std::string("ioncosmo ") + version_string);
    r.manifest.emplace_back("command", command);
    r.manifest.emplace_back("kind", scenario_kind_name(cfg.kind));
    r.manifest.emplace_back("config_hash", hash_hex(cfg.config_hash));
    r.manifest.emplace_back("seed", std::to_string(cfg.seed));
    r.manifest.emplace_back("frequency_unit", format_double(cfg.frequency_unit));
    for (std::size_t i = 0; i < cfg.unit_notes.size(); ++i)
        r.manifest.emplace_back("unit_note_" + std::to_string(i), cfg.unit_notes[i]);
}

FockDistribution initial_distribution(const ScenarioConfig& cfg) {
    return thermal_distribution(cfg.state.thermal ? cfg.state.mean_n : 0.0,
                                cfg.fock.n_max);
}

FockDistribution final_distribution(const ScenarioConfig& cfg, double xi_mag) {
    if (cfg.state.thermal)
        return squeezed_thermal_distribution(xi_mag, cfg.state.mean_n, cfg.fock.n_max);
    return squeezed_vacuum_distribution(xi_mag, cfg.fock.n_max);
}

void run_trap(const ScenarioConfig& cfg, ScenarioResult& result) {
    const ChainConfiguration chain = analyze_chain(cfg.n_ions);
    const std::vector<int> modes = selected_modes(cfg, cfg.n_ions);
    const ModeIntegrationOptions mopt = mode_options(cfg);

    result.manifest.emplace_back("n_ions", std::to_string(cfg.n_ions));
    result.manifest.emplace_back("equilibrium_residual",
                                 format_double(chain.equilibrium_residual));

    // A single shared scale factor drives every Coulomb mode; a lone ion has
    // no Coulomb dynamics and keeps b = 1.
    std::shared_ptr<const ScaleFactorSolution> scale;
    std::function<double(double)> b_fn;
    if (cfg.n_ions > 1) {
        ScaleFactorOptions sopt;
        sopt.rtol = cfg.integration.rtol;
        scale = std::make_shared<const ScaleFactorSolution>(
            integrate_scale_factor(cfg.ramp, sopt));
        b_fn = [scale](double t) { return scale->value(t); };
        result.manifest.emplace_back("scale_energy_drift",
                                     format_double(scale->energy_drift()));
    }

    auto profile_for = [&](int kappa) {
        return trap_mode_profile(cfg.ramp, chain.mode_freqs_sq[kappa],
                                 chain.mode_freqs_sq[kappa] > 0.0 ? b_fn : nullptr);
    };

    OutputTable evolution{"evolution", "mode,t,b,omega,abs_chi", {}};
    OutputTable bogo{"bogoliubov", "mode,abs_alpha,abs_beta,n_created,abs_xi", {}};
    OutputTable pops{"populations", "mode,n,p_initial,p_final", {}};
    OutputTable pops_oracle{"populations_oracle", "mode,n,p_final", {}};

    const FockDistribution p_in = initial_distribution(cfg);

    double max_wronskian = 0.0;
    double max_error = 0.0;
    int readout_mode_pos = -1;
    std::vector<FockDistribution> finals;
    std::ostringstream digest;
    digest << cfg.n_ions << (cfg.n_ions == 1 ? " ion" : " ions") << ", "
           << modes.size() << (modes.size() == 1 ? " mode\n" : " modes\n");

    for (std::size_t pos = 0; pos < modes.size(); ++pos) {
        const int kappa = modes[pos];
        const FrequencyProfile prof = profile_for(kappa);
        const ModeEvolution evo = integrate_mode(prof, mopt);
        max_wronskian = std::max(max_wronskian, evo.wronskian_drift);
        max_error = std::max(max_error, evo.error_estimate);

        const std::string mode_cell = std::to_string(kappa);
        for (const ModeSample& s : evo.samples) {
            const double b = scale ? scale->value(s.t) : 1.0;
            evolution.rows.push_back(mode_cell + "," + format_double(s.t) + "," +
                                     format_double(b) + "," + format_double(s.omega) +
                                     "," + format_double(std::abs(s.chi)));
        }
        bogo.rows.push_back(mode_cell + "," + format_double(std::abs(evo.alpha)) +
                            "," + format_double(std::abs(evo.beta)) + "," +
                            format_double(evo.n_created) + "," +
                            format_double(std::abs(evo.xi)));

        const double xi_mag = std::abs(evo.xi);
        FockDistribution p_out = final_distribution(cfg, xi_mag);
        for (int n = 0; n <= cfg.fock.n_max; ++n)
            pops.rows.push_back(mode_cell + "," + std::to_string(n) + "," +
                                format_double(p_in.probability(n)) + "," +
                                format_double(p_out.probability(n)));

        if (cfg.fock.oracle) {
            const FockOracleResult oracle = evolve_fock_oracle(
                prof, p_in, cfg.fock.n_max, kOracleTol, cfg.integration.flat_tol);
            for (int n = 0; n <= cfg.fock.n_max; ++n)
                pops_oracle.rows.push_back(mode_cell + "," + std::to_string(n) + "," +
                                           format_double(oracle.dist.probability(n)));
            result.manifest.emplace_back(
                "oracle_tv_gap_mode" + mode_cell,
                format_double(total_variation(p_out, oracle.dist)));
            result.manifest.emplace_back("oracle_refinement_gap_mode" + mode_cell,
                                         format_double(oracle.refinement_gap));
        }

        digest << "mode " << kappa << ": n_created = " << format_double(evo.n_created)
               << ", |xi| = " << format_double(xi_mag) << "\n";

        if (cfg.readout.enabled && kappa == cfg.readout.mode_index)
            readout_mode_pos = static_cast<int>(pos);
        finals.push_back(std::move(p_out));
    }

    result.manifest.emplace_back("max_wronskian_drift", format_double(max_wronskian));
    result.manifest.emplace_back("max_error_estimate", format_double(max_error));

    result.tables.push_back(std::move(evolution));
    result.tables.push_back(std::move(bogo));
    result.tables.push_back(std::move(pops));
    if (cfg.fock.oracle) result.tables.push_back(std::move(pops_oracle));

    if (cfg.readout.enabled) {
        FockDistribution dist;
        if (readout_mode_pos >= 0) {
            dist = finals[static_cast<std::size_t>(readout_mode_pos)];
        } else {
            // Detection can address a mode outside the reported selection.
            const ModeEvolution evo =
                integrate_mode(profile_for(cfg.readout.mode_index), mopt);
            dist = final_distribution(cfg, std::abs(evo.xi));
        }

        OutputTable rt{"readout", "sequence,bright_probability,trials,bright_count", {}};
        for (std::size_t i = 0; i < cfg.readout.sequences.size(); ++i) {
            const char first = cfg.readout.sequences[i];
            const auto pulses = standard_sequence(first, cfg.readout.eta);
            const ReadoutOutcome outcome =
                apply_sequence(dist, pulses, cfg.readout.mode);
            std::uint64_t count = 0;
            if (cfg.readout.trials > 0)
                count = sample_detection(outcome, cfg.readout.trials, cfg.seed + i,
                                         cfg.readout.detection_efficiency);
            const std::string label = (first == 'a') ? "acd" : "bcd";
            rt.rows.push_back(label + "," + format_double(outcome.bright_probability) +
                              "," + std::to_string(cfg.readout.trials) + "," +
                              std::to_string(count));
            digest << "readout " << label
                   << ": bright = " << format_double(outcome.bright_probability)
                   << "\n";
        }
        result.manifest.emplace_back("readout_mode",
                                     std::to_string(cfg.readout.mode_index));
        result.manifest.emplace_back("detection_efficiency",
                                     format_double(cfg.readout.detection_efficiency));
        result.tables.push_back(std::move(rt));
    }

    result.summary = digest.str();
}

std::vector<double> grid_points(double lo, double hi, int count, bool log_scale) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        v.push_back(lo);
        return v;
    }
    for (int i = 0; i < count; ++i) {
        const double s = static_cast<double>(i) / (count - 1);
        v.push_back(log_scale ? lo * std::pow(hi / lo, s) : lo + (hi - lo) * s);
    }
    return v;
}

void run_cosmology(const ScenarioConfig& cfg, ScenarioResult& result) {
    CosmologyScenario scen;
    scen.a_profile.omega_initial = cfg.cosmo.a_initial;
    scen.a_profile.omega_final = cfg.cosmo.a_final;
    scen.a_profile.rise_time = cfg.cosmo.rise_time;
    scen.a_profile.shape = cfg.cosmo.shape;
    scen.a_profile.head_hold = cfg.cosmo.head_hold;
    scen.a_profile.tail_hold = cfg.cosmo.tail_hold;
    scen.zeta = cfg.cosmo.zeta;
    scen.ricci_samples = cfg.cosmo.ricci_samples;

    const std::vector<double> ks =
        grid_points(cfg.cosmo.k_min, cfg.cosmo.k_max, cfg.cosmo.k_count, cfg.cosmo.k_log);
    const auto spectrum = cosmological_spectrum(scen, ks, mode_options(cfg));

    OutputTable table{"cosmo_spectrum", "k,abs_xi,n_created", {}};
    double peak_n = 0.0, peak_k = ks.front();
    for (const SpectrumEntry& e : spectrum) {
        table.rows.push_back(format_double(e.k) + "," + format_double(e.xi_mag) + "," +
                             format_double(e.n_created));
        if (e.n_created > peak_n) {
            peak_n = e.n_created;
            peak_k = e.k;
        }
    }
    result.tables.push_back(std::move(table));

    result.manifest.emplace_back("a_initial", format_double(cfg.cosmo.a_initial));
    result.manifest.emplace_back("a_final", format_double(cfg.cosmo.a_final));
    result.manifest.emplace_back("zeta", format_double(cfg.cosmo.zeta));

    std::ostringstream digest;
    digest << spectrum.size() << " modes, k in [" << format_double(ks.front()) << ", "
           << format_double(ks.back()) << "]\n"
           << "largest n_created = " << format_double(peak_n) << " at k = "
           << format_double(peak_k) << "\n";
    result.summary = digest.str();
}

} // namespace

std::string format_double(double v) {
    // Shortest representation that parses back to the same double.
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

ScenarioResult run_modes(const ScenarioConfig& cfg) {
    require(cfg.kind != ScenarioKind::Cosmology, ErrorCode::Validation,
            "mode analysis applies to trap scenarios only");
    ScenarioResult result;
    begin_manifest(result, cfg, "modes");

    const ChainConfiguration chain = analyze_chain(cfg.n_ions);
    result.manifest.emplace_back("n_ions", std::to_string(cfg.n_ions));
    result.manifest.emplace_back("equilibrium_residual",
                                 format_double(chain.equilibrium_residual));

    OutputTable eq{"equilibrium", "ion,position", {}};
    for (int i = 0; i < cfg.n_ions; ++i)
        eq.rows.push_back(std::to_string(i) + "," + format_double(chain.positions[i]));
    result.tables.push_back(std::move(eq));

    OutputTable mt{"modes", "kappa,omega_kappa_sq,ion,component", {}};
    for (int kappa = 0; kappa < cfg.n_ions; ++kappa)
        for (int i = 0; i < cfg.n_ions; ++i)
            mt.rows.push_back(std::to_string(kappa) + "," +
                              format_double(chain.mode_freqs_sq[kappa]) + "," +
                              std::to_string(i) + "," +
                              format_double(chain.mode_vectors(i, kappa)));
    result.tables.push_back(std::move(mt));

    std::ostringstream digest;
    digest << cfg.n_ions << (cfg.n_ions == 1 ? " ion" : " ions")
           << ", omega_kappa_sq =";
    for (double w : chain.mode_freqs_sq) digest << " " << format_double(w);
    digest << "\n";
    result.summary = digest.str();
    return result;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::string& command) {
    ScenarioResult result;
    begin_manifest(result, cfg, command);
    if (cfg.kind == ScenarioKind::Cosmology)
        run_cosmology(cfg, result);
    else
        run_trap(cfg, result);
    return result;
}

ScenarioResult run_sweep(const ScenarioConfig& cfg) {
    require(cfg.sweep.enabled, ErrorCode::Validation,
            "sweep requested but the config has no [sweep] section");
    require(cfg.kind == ScenarioKind::TrapSingleIon, ErrorCode::Validation,
            "sweeps run on kind trap_single_ion only");

    ScenarioResult result;
    begin_manifest(result, cfg, "sweep");
    result.manifest.emplace_back("sweep_parameter", cfg.sweep.parameter);
    result.manifest.emplace_back("sweep_count", std::to_string(cfg.sweep.count));

    const ModeIntegrationOptions mopt = mode_options(cfg);
    const std::vector<double> values =
        grid_points(cfg.sweep.min, cfg.sweep.max, cfg.sweep.count, cfg.sweep.log_scale);

    OutputTable table{"sweep", "parameter,value,n_created,abs_beta,abs_xi", {}};
    for (double v : values) {
        TrapRamp ramp = cfg.ramp;
        if (cfg.sweep.parameter == "ramp.rise_time")
            ramp.rise_time = v;
        else if (cfg.sweep.parameter == "ramp.omega_final")
            ramp.omega_final = v;
        else if (cfg.sweep.parameter == "ramp.head_hold")
            ramp.head_hold = v;
        else if (cfg.sweep.parameter == "ramp.tail_hold")
            ramp.tail_hold = v;
        else
            fail(ErrorCode::Validation,
                 "unsupported sweep parameter " + cfg.sweep.parameter);

        const FrequencyProfile prof = trap_mode_profile(ramp, 0.0);
        const ModeEvolution evo = integrate_mode(prof, mopt);
        table.rows.push_back(cfg.sweep.parameter + "," + format_double(v) + "," +
                             format_double(evo.n_created) + "," +
                             format_double(std::abs(evo.beta)) + "," +
                             format_double(std::abs(evo.xi)));
    }
    result.tables.push_back(std::move(table));

    std::ostringstream digest;
    digest << cfg.sweep.parameter << " from " << format_double(values.front())
           << " to " << format_double(values.back()) << " in " << values.size()
           << (values.size() == 1 ? " step\n" : " steps\n");
    result.summary = digest.str();
    return result;
}

void write_result(const ScenarioResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(out_dir), ec);
    require(!ec, ErrorCode::Io, "cannot create output directory " + out_dir);

    auto write_file = [&](const std::string& name, const std::string& body) {
        const fs::path path = fs::path(out_dir) / name;
        std::ofstream f(path, std::ios::binary);
        require(f.is_open(), ErrorCode::Io, "cannot open " + path.string());
        f << body;
        f.flush();
        require(f.good(), ErrorCode::Io, "write failed for " + path.string());
    };

    for (const OutputTable& table : result.tables) {
        std::string body = table.header + "\n";
        for (const std::string& row : table.rows) {
            body += row;
            body += '\n';
        }
        write_file(table.name + ".csv", body);
    }

    std::string manifest;
    for (const auto& [key, value] : result.manifest)
        manifest += key + " = " + value + "\n";
    write_file("manifest.txt", manifest);
}

} // namespace ioncosmo
