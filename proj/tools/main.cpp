// Command-line front end. Talks to the library exclusively through the C
// interface so the binary exercises the same surface other language bindings
// would use.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "ioncosmo.h"

namespace {

int report_failure(ionc_status status) {
    std::fprintf(stderr, "error (%s): %s\n", ionc_status_name(status),
                 ionc_last_error());
    return 1;
}

struct RunArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    double rtol = 0.0;
    bool rtol_set = false;
};

void add_run_options(CLI::App* cmd, RunArgs& args, bool with_overrides) {
    cmd->add_option("-c,--config", args.config_path, "Scenario config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("-o,--out", args.out_dir,
                    "Output directory for CSV tables and manifest.txt");
    if (with_overrides) {
        cmd->add_option("--seed", args.seed, "Override the config seed")
            ->each([&args](const std::string&) { args.seed_set = true; });
        cmd->add_option("--tol", args.rtol,
                        "Override the integrator relative tolerance")
            ->each([&args](const std::string&) { args.rtol_set = true; });
    }
}

int execute(const char* command, const RunArgs& args) {
    ionc_config* cfg = nullptr;
    ionc_status st = ionc_config_load(args.config_path.c_str(), &cfg);
    if (st != IONC_OK) return report_failure(st);

    if (args.seed_set) {
        st = ionc_config_set_seed(cfg, args.seed);
        if (st != IONC_OK) {
            ionc_config_free(cfg);
            return report_failure(st);
        }
    }
    if (args.rtol_set) {
        st = ionc_config_set_rtol(cfg, args.rtol);
        if (st != IONC_OK) {
            ionc_config_free(cfg);
            return report_failure(st);
        }
    }

    char* summary = nullptr;
    st = ionc_run(cfg, command, args.out_dir.c_str(), &summary);
    ionc_config_free(cfg);
    if (st != IONC_OK) return report_failure(st);

    if (summary) {
        std::fputs(summary, stdout);
        ionc_string_free(summary);
    }
    std::printf("wrote %s\n", args.out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trapped-ion chain modes under time-dependent confinement: "
                 "particle creation, number statistics, sideband readout and "
                 "matched expansion histories"};
    app.set_version_flag("--version", std::string(ionc_version()));
    app.require_subcommand(1);

    RunArgs run_args, modes_args, sweep_args, cosmo_args;
    double tol_scale = 1.0;
    bool tamper = false;
    std::string report_path;

    CLI::App* run_cmd =
        app.add_subcommand("run", "Evolve the configured scenario and write tables");
    add_run_options(run_cmd, run_args, true);

    CLI::App* modes_cmd = app.add_subcommand(
        "modes", "Write equilibrium positions and normal modes only");
    add_run_options(modes_cmd, modes_args, false);

    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Scan one ramp parameter and tabulate the created quanta");
    add_run_options(sweep_cmd, sweep_args, true);

    CLI::App* cosmo_cmd = app.add_subcommand(
        "cosmo", "Evolve a comoving-mode spectrum for the configured expansion");
    add_run_options(cosmo_cmd, cosmo_args, true);

    CLI::App* validate_cmd = app.add_subcommand(
        "validate", "Recompute cross-module invariants and print a JSON report");
    validate_cmd->add_option("--tol-scale", tol_scale,
                             "Multiply every bound (smaller is stricter)");
    validate_cmd->add_flag("--tamper-hessian-sign", tamper,
                           "Negative control: corrupt one coupling sign; the "
                           "report must catch it");
    validate_cmd->add_option("--report", report_path,
                             "Also write the JSON report to this file");

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) return execute("run", run_args);
    if (modes_cmd->parsed()) return execute("modes", modes_args);
    if (sweep_cmd->parsed()) return execute("sweep", sweep_args);
    if (cosmo_cmd->parsed()) return execute("cosmo", cosmo_args);

    if (validate_cmd->parsed()) {
        char* report = nullptr;
        int32_t passed = 0;
        const ionc_status st = ionc_validate(tol_scale, tamper ? 1 : 0, &report, &passed);
        if (st != IONC_OK) return report_failure(st);
        if (report) {
            std::fputs(report, stdout);
            if (!report_path.empty()) {
                std::FILE* f = std::fopen(report_path.c_str(), "wb");
                if (!f) {
                    std::fprintf(stderr, "error (io): cannot open %s\n",
                                 report_path.c_str());
                    ionc_string_free(report);
                    return 1;
                }
                std::fputs(report, f);
                std::fclose(f);
            }
            ionc_string_free(report);
        }
        return passed ? 0 : 1;
    }

    return 0;
}
