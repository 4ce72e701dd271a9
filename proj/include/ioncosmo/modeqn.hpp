#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "ioncosmo/ramp.hpp"

namespace ioncosmo {

// Time-dependent frequency for one mode: chi'' + omega_sq(t) chi = 0 on
// [0, t_end]. The profile must be flat (to within the caller's tolerance) on
// the head [0, head_end] and tail [tail_start, t_end] so in/out vacua exist.
struct FrequencyProfile {
    std::function<double(double)> omega_sq;
    double t_end = 0.0;
    double head_end = 0.0;
    double tail_start = 0.0;
    std::vector<double> breakpoints; // ascending, inside [0, t_end]

    // When non-empty the profile is exactly piecewise constant and integration
    // uses closed-form rotations instead of the ODE solver. Segments are
    // (t_start, t_stop, omega) covering [0, t_end] in order; a zero-length
    // first segment still fixes the in-vacuum frequency.
    struct ConstSegment {
        double t_start, t_stop, omega;
    };
    std::vector<ConstSegment> const_segments;
};

struct ModeSample {
    double t = 0.0;
    double omega = 0.0;
    std::complex<double> chi, chi_dot;
    double wronskian = 0.0; // 2 Im(chi conj(chi_dot)), exactly 1 for the true solution
};

struct ModeEvolution {
    double omega_in = 0.0;
    double omega_out = 0.0;
    std::complex<double> alpha{1.0, 0.0}; // phase fixed so alpha is real >= 1
    std::complex<double> beta{0.0, 0.0};
    std::complex<double> xi{0.0, 0.0};    // |xi| = asinh|beta|
    double n_created = 0.0;               // |beta|^2
    double wronskian_drift = 0.0;         // max |w - 1| over samples
    double error_estimate = 0.0;          // conservative bound on n_created error
    std::vector<ModeSample> samples;
};

struct ModeIntegrationOptions {
    double rtol = 1e-10;
    double flat_tol = 1e-6; // relative frequency deviation allowed on head/tail
    int n_samples = 257;    // uniformly spaced records, endpoints included
};

// Starts the mode in the in-vacuum (positive-frequency WKB solution of the
// head frequency), integrates through the profile, and projects the tail onto
// in/out plane waves of the tail frequency to obtain Bogoliubov coefficients.
// Throws NegativeFrequencySquared if omega_sq is ever <= 0, and
// NonConstantBoundary if head or tail is not flat to flat_tol.
ModeEvolution integrate_mode(const FrequencyProfile& profile,
                             const ModeIntegrationOptions& opt = {});

// Closed-form particle creation for an instantaneous frequency jump:
// n = (omega_f - omega_i)^2 / (4 omega_i omega_f), and the matching squeezing
// magnitude asinh(sqrt(n)). Valid for any positive pair of frequencies.
struct SuddenLimit {
    double n_created;
    double xi_mag;
};
SuddenLimit sudden_limit(double omega_i, double omega_f);

// Composition of two Bogoliubov transforms applied in sequence (first, then
// second): returns (alpha, beta) of the combined map.
std::pair<std::complex<double>, std::complex<double>>
compose_bogoliubov(std::complex<double> alpha2, std::complex<double> beta2,
                   std::complex<double> alpha1, std::complex<double> beta1);

// Profile for one phonon mode of a trapped chain under an axial ramp:
// omega_sq(t) = omega_ax^2(t) + omega_ax^2(0) omega_kappa_sq / b(t)^3 where
// omega_kappa_sq is the dimensionless Hessian eigenvalue and b the breathing
// scale factor of the chain (pass b_of_t only when omega_kappa_sq > 0; the
// center-of-mass mode has omega_kappa_sq = 0 and needs no scale factor). For
// step ramps of the center-of-mass mode the profile is marked piecewise
// constant and solved in closed form.
FrequencyProfile trap_mode_profile(const TrapRamp& ramp, double omega_kappa_sq,
                                   std::function<double(double)> b_of_t = nullptr);

} // namespace ioncosmo
