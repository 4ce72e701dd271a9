#ifndef IONCOSMO_H
#define IONCOSMO_H

/* C interface to the ioncosmo library: trap-frequency ramps acting on the
 * normal modes of a trapped-ion chain, the quanta they create, number-state
 * populations, sideband readout, and matched expansion-history runs.
 *
 * Every function returns an ionc_status: 0 on success, a stable nonzero
 * code otherwise. ionc_last_error() describes the most recent failure on
 * the calling thread. Objects returned through ionc_*_new/parse/load calls
 * are owned by the caller and released with the matching _free function.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t ionc_status;

/* 0 = ok; nonzero values are stable across patch releases. */
#define IONC_OK 0

const char* ionc_version(void);
const char* ionc_status_name(ionc_status status);
/* Valid until the next failing call on the same thread. */
const char* ionc_last_error(void);

/* Frees strings returned through char** out-parameters. */
void ionc_string_free(char* s);

/* ---- scenario configs ------------------------------------------------- */

typedef struct ionc_config ionc_config;

ionc_status ionc_config_parse(const char* text, ionc_config** out);
ionc_status ionc_config_load(const char* path, ionc_config** out);
void ionc_config_free(ionc_config* cfg);

/* Static string: "trap_single_ion", "trap_chain" or "cosmology". */
ionc_status ionc_config_kind(const ionc_config* cfg, const char** out);
ionc_status ionc_config_hash(const ionc_config* cfg, uint64_t* out);
ionc_status ionc_config_set_seed(ionc_config* cfg, uint64_t seed);
ionc_status ionc_config_set_rtol(ionc_config* cfg, double rtol);

/* Runs a scenario and writes its CSV tables plus manifest.txt into out_dir
 * (created if missing). command selects the operation: "run", "modes",
 * "sweep" or "cosmo". summary (optional) receives a short human-readable
 * digest; free it with ionc_string_free. */
ionc_status ionc_run(const ionc_config* cfg, const char* command,
                     const char* out_dir, char** summary);

/* ---- chain statics ----------------------------------------------------- */

typedef struct ionc_chain ionc_chain;

ionc_status ionc_chain_analyze(int32_t n_ions, ionc_chain** out);
void ionc_chain_free(ionc_chain* chain);
ionc_status ionc_chain_size(const ionc_chain* chain, int32_t* out);
/* Buffers hold n_ions values; mode vectors are unit eigenvectors. */
ionc_status ionc_chain_positions(const ionc_chain* chain, double* out, int32_t len);
ionc_status ionc_chain_mode_freqs_sq(const ionc_chain* chain, double* out, int32_t len);
ionc_status ionc_chain_mode_vector(const ionc_chain* chain, int32_t kappa,
                                   double* out, int32_t len);

/* ---- single-mode response to a frequency ramp -------------------------- */

typedef struct {
    double omega_initial;
    double omega_final;
    double rise_time;
    const char* shape; /* "linear", "tanh", "exponential" or "step" */
    double head_hold;
    double tail_hold;
    /* Optional preparation leg; prep_omega 0 disables it. */
    double prep_omega;
    double prep_time;
    double prep_hold;
} ionc_ramp;

typedef struct {
    double omega_in;
    double omega_out;
    double abs_alpha;
    double abs_beta;
    double n_created;       /* |beta|^2 */
    double abs_xi;          /* asinh |beta| */
    double error_estimate;
    double wronskian_drift;
} ionc_mode_result;

/* Evolves one normal mode through the ramp. omega_kappa_sq is the chain
 * eigenvalue (0 for a lone ion or the rigid mode); positive values make the
 * mode ride on the internally integrated breathing scale factor. */
ionc_status ionc_mode_evolve(const ionc_ramp* ramp, double omega_kappa_sq,
                             double rtol, ionc_mode_result* out);

/* Closed-form instantaneous-jump response. */
ionc_status ionc_sudden_limit(double omega_initial, double omega_final,
                              double* n_created, double* abs_xi);

/* ---- number-state distributions ---------------------------------------- */

typedef struct ionc_dist ionc_dist;

/* n_max 0 sizes the support automatically. */
ionc_status ionc_dist_thermal(double mean_n, int32_t n_max, ionc_dist** out);
ionc_status ionc_dist_squeezed_vacuum(double abs_xi, int32_t n_max, ionc_dist** out);
ionc_status ionc_dist_squeezed_thermal(double abs_xi, double mean_n, int32_t n_max,
                                       ionc_dist** out);
void ionc_dist_free(ionc_dist* dist);
ionc_status ionc_dist_len(const ionc_dist* dist, int32_t* out); /* n_max + 1 */
ionc_status ionc_dist_probabilities(const ionc_dist* dist, double* out, int32_t len);
ionc_status ionc_dist_mean(const ionc_dist* dist, double* out);

/* ---- sideband readout --------------------------------------------------- */

/* Runs a three-pulse discrimination sequence on the distribution and returns
 * the bright (spin-down) probability. sequence is "acd" (second sideband
 * first) or "bcd" (first sideband first); mode is "ideal_pi" or
 * "rabi_dynamics"; eta in (0, 1). */
ionc_status ionc_readout_bright(const ionc_dist* dist, const char* sequence,
                                const char* mode, double eta, double* bright);

/* Binomial photon-count draw; deterministic in (trials, seed, efficiency). */
ionc_status ionc_readout_sample(double bright_probability, uint64_t trials,
                                uint64_t seed, double detection_efficiency,
                                uint64_t* bright_count);

/* ---- self-checks --------------------------------------------------------- */

/* Recomputes the library's cross-module invariants. tol_scale multiplies
 * every bound (use < 1 to probe margins); tamper_hessian_sign flips one
 * Coulomb coupling as a negative control that must be caught. report_json
 * (optional) receives the full report; free with ionc_string_free. passed
 * (optional) receives 1/0. The call itself fails only on setup errors, not
 * on failed checks. */
ionc_status ionc_validate(double tol_scale, int32_t tamper_hessian_sign,
                          char** report_json, int32_t* passed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* IONCOSMO_H */
