#include "ioncosmo.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <utility>

#include "ioncosmo/chain.hpp"
#include "ioncosmo/classical.hpp"
#include "ioncosmo/config.hpp"
#include "ioncosmo/errors.hpp"
#include "ioncosmo/fock.hpp"
#include "ioncosmo/modeqn.hpp"
#include "ioncosmo/readout.hpp"
#include "ioncosmo/scenario.hpp"
#include "ioncosmo/validate.hpp"
#include "ioncosmo/version.hpp"

using namespace ioncosmo;

struct ionc_config {
    ScenarioConfig cfg;
};

struct ionc_chain {
    ChainConfiguration chain;
};

struct ionc_dist {
    FockDistribution dist;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
ionc_status guarded(F&& body) noexcept {
    try {
        body();
        return IONC_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return static_cast<ionc_status>(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return static_cast<ionc_status>(ErrorCode::Internal);
    } catch (...) {
        g_last_error = "unknown failure";
        return static_cast<ionc_status>(ErrorCode::Internal);
    }
}

void require_arg(const void* p, const char* what) {
    require(p != nullptr, ErrorCode::InvalidArgument,
            std::string(what) + " must not be null");
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    require(out != nullptr, ErrorCode::Internal, "out of memory");
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

TrapRamp to_ramp(const ionc_ramp& r) {
    require_arg(r.shape, "ramp shape");
    TrapRamp ramp;
    ramp.omega_initial = r.omega_initial;
    ramp.omega_final = r.omega_final;
    ramp.rise_time = r.rise_time;
    ramp.shape = ramp_shape_from_name(r.shape);
    ramp.head_hold = r.head_hold;
    ramp.tail_hold = r.tail_hold;
    ramp.prep_omega = r.prep_omega;
    ramp.prep_time = r.prep_time;
    ramp.prep_hold = r.prep_hold;
    ramp.validate();
    return ramp;
}

void copy_buffer(const std::vector<double>& src, double* out, int32_t len,
                 const char* what) {
    require_arg(out, what);
    require(static_cast<std::size_t>(len) == src.size(), ErrorCode::DimensionMismatch,
            std::string(what) + ": buffer holds " + std::to_string(len) +
                " values, need " + std::to_string(src.size()));
    std::memcpy(out, src.data(), src.size() * sizeof(double));
}

} // namespace

extern "C" {

const char* ionc_version(void) { return version_string; }

const char* ionc_status_name(ionc_status status) {
    if (status == IONC_OK) return "ok";
    switch (static_cast<ErrorCode>(status)) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::Parse:
    case ErrorCode::Validation:
    case ErrorCode::NoConvergence:
    case ErrorCode::DegeneratePositions:
    case ErrorCode::NegativeFrequencySquared:
    case ErrorCode::NonConstantBoundary:
    case ErrorCode::ToleranceNotMet:
    case ErrorCode::Collapse:
    case ErrorCode::IonCollision:
    case ErrorCode::TruncationTooSmall:
    case ErrorCode::NotNormalized:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::Io:
    case ErrorCode::Internal:
        return error_code_name(static_cast<ErrorCode>(status));
    }
    return "unknown";
}

const char* ionc_last_error(void) { return g_last_error.c_str(); }

void ionc_string_free(char* s) { std::free(s); }

/* ---- configs ------------------------------------------------------------ */

ionc_status ionc_config_parse(const char* text, ionc_config** out) {
    return guarded([&] {
        require_arg(text, "config text");
        require_arg(out, "config out");
        *out = new ionc_config{parse_config(text)};
    });
}

ionc_status ionc_config_load(const char* path, ionc_config** out) {
    return guarded([&] {
        require_arg(path, "config path");
        require_arg(out, "config out");
        *out = new ionc_config{load_config_file(path)};
    });
}

void ionc_config_free(ionc_config* cfg) { delete cfg; }

ionc_status ionc_config_kind(const ionc_config* cfg, const char** out) {
    return guarded([&] {
        require_arg(cfg, "config");
        require_arg(out, "kind out");
        *out = scenario_kind_name(cfg->cfg.kind);
    });
}

ionc_status ionc_config_hash(const ionc_config* cfg, uint64_t* out) {
    return guarded([&] {
        require_arg(cfg, "config");
        require_arg(out, "hash out");
        *out = cfg->cfg.config_hash;
    });
}

ionc_status ionc_config_set_seed(ionc_config* cfg, uint64_t seed) {
    return guarded([&] {
        require_arg(cfg, "config");
        cfg->cfg.seed = seed;
    });
}

ionc_status ionc_config_set_rtol(ionc_config* cfg, double rtol) {
    return guarded([&] {
        require_arg(cfg, "config");
        require(rtol >= 1e-14 && rtol <= 1e-2, ErrorCode::InvalidArgument,
                "rtol must lie in [1e-14, 1e-2]");
        cfg->cfg.integration.rtol = rtol;
    });
}

ionc_status ionc_run(const ionc_config* cfg, const char* command,
                     const char* out_dir, char** summary) {
    return guarded([&] {
        require_arg(cfg, "config");
        require_arg(command, "command");
        require_arg(out_dir, "output directory");

        const std::string cmd = command;
        ScenarioResult result;
        if (cmd == "run") {
            result = run_scenario(cfg->cfg, "run");
        } else if (cmd == "cosmo") {
            require(cfg->cfg.kind == ScenarioKind::Cosmology, ErrorCode::Validation,
                    std::string("cosmo runs a cosmology config (this one is kind ") +
                        scenario_kind_name(cfg->cfg.kind) + ")");
            result = run_scenario(cfg->cfg, "cosmo");
        } else if (cmd == "modes") {
            result = run_modes(cfg->cfg);
        } else if (cmd == "sweep") {
            result = run_sweep(cfg->cfg);
        } else {
            fail(ErrorCode::InvalidArgument,
                 "command must be run, cosmo, modes or sweep (got " + cmd + ")");
        }

        write_result(result, out_dir);
        if (summary) *summary = copy_string(result.summary);
    });
}

/* ---- chain statics -------------------------------------------------------- */

ionc_status ionc_chain_analyze(int32_t n_ions, ionc_chain** out) {
    return guarded([&] {
        require_arg(out, "chain out");
        *out = new ionc_chain{analyze_chain(n_ions)};
    });
}

void ionc_chain_free(ionc_chain* chain) { delete chain; }

ionc_status ionc_chain_size(const ionc_chain* chain, int32_t* out) {
    return guarded([&] {
        require_arg(chain, "chain");
        require_arg(out, "size out");
        *out = chain->chain.n_ions;
    });
}

ionc_status ionc_chain_positions(const ionc_chain* chain, double* out, int32_t len) {
    return guarded([&] {
        require_arg(chain, "chain");
        copy_buffer(chain->chain.positions, out, len, "positions");
    });
}

ionc_status ionc_chain_mode_freqs_sq(const ionc_chain* chain, double* out,
                                     int32_t len) {
    return guarded([&] {
        require_arg(chain, "chain");
        copy_buffer(chain->chain.mode_freqs_sq, out, len, "mode frequencies");
    });
}

ionc_status ionc_chain_mode_vector(const ionc_chain* chain, int32_t kappa,
                                   double* out, int32_t len) {
    return guarded([&] {
        require_arg(chain, "chain");
        const int n = chain->chain.n_ions;
        require(kappa >= 0 && kappa < n, ErrorCode::InvalidArgument,
                "mode index out of range");
        std::vector<double> column(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) column[i] = chain->chain.mode_vectors(i, kappa);
        copy_buffer(column, out, len, "mode vector");
    });
}

/* ---- mode evolution -------------------------------------------------------- */

ionc_status ionc_mode_evolve(const ionc_ramp* ramp, double omega_kappa_sq,
                             double rtol, ionc_mode_result* out) {
    return guarded([&] {
        require_arg(ramp, "ramp");
        require_arg(out, "result out");
        const TrapRamp r = to_ramp(*ramp);

        ModeIntegrationOptions opt;
        opt.rtol = rtol;

        std::function<double(double)> b_fn;
        if (omega_kappa_sq > 0.0) {
            ScaleFactorOptions so;
            so.rtol = rtol;
            auto scale = std::make_shared<const ScaleFactorSolution>(
                integrate_scale_factor(r, so));
            b_fn = [scale](double t) { return scale->value(t); };
        }

        const ModeEvolution evo =
            integrate_mode(trap_mode_profile(r, omega_kappa_sq, b_fn), opt);
        out->omega_in = evo.omega_in;
        out->omega_out = evo.omega_out;
        out->abs_alpha = std::abs(evo.alpha);
        out->abs_beta = std::abs(evo.beta);
        out->n_created = evo.n_created;
        out->abs_xi = std::abs(evo.xi);
        out->error_estimate = evo.error_estimate;
        out->wronskian_drift = evo.wronskian_drift;
    });
}

ionc_status ionc_sudden_limit(double omega_initial, double omega_final,
                              double* n_created, double* abs_xi) {
    return guarded([&] {
        const SuddenLimit lim = sudden_limit(omega_initial, omega_final);
        if (n_created) *n_created = lim.n_created;
        if (abs_xi) *abs_xi = lim.xi_mag;
    });
}

/* ---- distributions ---------------------------------------------------------- */

ionc_status ionc_dist_thermal(double mean_n, int32_t n_max, ionc_dist** out) {
    return guarded([&] {
        require_arg(out, "distribution out");
        *out = new ionc_dist{thermal_distribution(mean_n, n_max)};
    });
}

ionc_status ionc_dist_squeezed_vacuum(double abs_xi, int32_t n_max, ionc_dist** out) {
    return guarded([&] {
        require_arg(out, "distribution out");
        *out = new ionc_dist{squeezed_vacuum_distribution(abs_xi, n_max)};
    });
}

ionc_status ionc_dist_squeezed_thermal(double abs_xi, double mean_n, int32_t n_max,
                                       ionc_dist** out) {
    return guarded([&] {
        require_arg(out, "distribution out");
        *out = new ionc_dist{squeezed_thermal_distribution(abs_xi, mean_n, n_max)};
    });
}

void ionc_dist_free(ionc_dist* dist) { delete dist; }

ionc_status ionc_dist_len(const ionc_dist* dist, int32_t* out) {
    return guarded([&] {
        require_arg(dist, "distribution");
        require_arg(out, "length out");
        *out = static_cast<int32_t>(dist->dist.p.size());
    });
}

ionc_status ionc_dist_probabilities(const ionc_dist* dist, double* out, int32_t len) {
    return guarded([&] {
        require_arg(dist, "distribution");
        copy_buffer(dist->dist.p, out, len, "probabilities");
    });
}

ionc_status ionc_dist_mean(const ionc_dist* dist, double* out) {
    return guarded([&] {
        require_arg(dist, "distribution");
        require_arg(out, "mean out");
        *out = dist->dist.mean();
    });
}

/* ---- readout ------------------------------------------------------------------ */

ionc_status ionc_readout_bright(const ionc_dist* dist, const char* sequence,
                                const char* mode, double eta, double* bright) {
    return guarded([&] {
        require_arg(dist, "distribution");
        require_arg(sequence, "sequence");
        require_arg(mode, "pulse mode");
        require_arg(bright, "bright out");

        const std::string seq = sequence;
        char first = 0;
        if (seq == "acd" || seq == "a")
            first = 'a';
        else if (seq == "bcd" || seq == "b")
            first = 'b';
        else
            fail(ErrorCode::InvalidArgument,
                 "sequence must be acd or bcd (got " + seq + ")");

        const std::string mode_name = mode;
        PulseMode pm;
        if (mode_name == "ideal_pi")
            pm = PulseMode::IdealPi;
        else if (mode_name == "rabi_dynamics")
            pm = PulseMode::RabiDynamics;
        else
            fail(ErrorCode::InvalidArgument,
                 "pulse mode must be ideal_pi or rabi_dynamics (got " + mode_name + ")");

        const ReadoutOutcome outcome =
            apply_sequence(dist->dist, standard_sequence(first, eta), pm);
        *bright = outcome.bright_probability;
    });
}

ionc_status ionc_readout_sample(double bright_probability, uint64_t trials,
                                uint64_t seed, double detection_efficiency,
                                uint64_t* bright_count) {
    return guarded([&] {
        require_arg(bright_count, "count out");
        *bright_count =
            sample_detection(bright_probability, trials, seed, detection_efficiency);
    });
}

/* ---- self-checks ----------------------------------------------------------------- */

ionc_status ionc_validate(double tol_scale, int32_t tamper_hessian_sign,
                          char** report_json, int32_t* passed) {
    return guarded([&] {
        ValidationOptions opt;
        opt.tol_scale = tol_scale;
        opt.tamper_hessian_sign = tamper_hessian_sign != 0;
        const ValidationReport report = run_validation(opt);
        if (report_json) *report_json = copy_string(report.to_json());
        if (passed) *passed = report.passed ? 1 : 0;
    });
}

} /* extern "C" */
