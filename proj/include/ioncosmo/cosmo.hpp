#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ioncosmo/classical.hpp"
#include "ioncosmo/modeqn.hpp"
#include "ioncosmo/ramp.hpp"

namespace ioncosmo {

// Ricci scalar of a spatially flat FRW metric from scale-factor samples on a
// uniform time grid, in the time coordinate where the comoving-mode equation
// reads chi'' + (a^4 k^2 + zeta a^6 R) chi = 0:
// R = (6 / a^7) (a'' - 2 a'^2 / a). Second-order central differences inside,
// one-sided stencils of the same order at the ends.
std::vector<double> ricci_from_scale_factor(const std::vector<double>& t,
                                            const std::vector<double>& a);

// Expansion history: the scale factor follows the same flat-ramp-flat
// schedule machinery as the trap frequency (omega_* fields reread as a_*).
struct CosmologyScenario {
    TrapRamp a_profile;       // omega_initial/omega_final carry a_i/a_f
    double zeta = 0.0;        // curvature coupling
    int ricci_samples = 8193; // grid for the finite-difference Ricci scalar

    void validate() const;
};

// Frequency profile of comoving mode k: omega_sq(t) = a^4 k^2 + zeta a^6 R.
// With zeta != 0 the scenario must use a smooth shape (R needs two time
// derivatives). Step profiles with zeta == 0 are marked piecewise constant.
FrequencyProfile cosmology_mode_profile(const CosmologyScenario& scenario, double k);

struct SpectrumEntry {
    double k = 0.0;
    double omega_in = 0.0;
    double omega_out = 0.0;
    double n_created = 0.0;
    double xi_mag = 0.0;
    double sudden_n = 0.0; // instantaneous-jump reference for the same k
};

std::vector<SpectrumEntry> cosmological_spectrum(const CosmologyScenario& scenario,
                                                 const std::vector<double>& k_grid,
                                                 const ModeIntegrationOptions& opt = {});

// Particle creation for an instantaneous jump of the scale factor at zeta = 0:
// in/out frequencies are a_i^2 k and a_f^2 k.
SuddenLimit cosmological_sudden_limit(double k, double a_initial, double a_final);

// Term-by-term pairing between the trap mode equation
//   omega_ax^2(t) + omega_ax^2(0) omega_kappa^2 / b^3(t)
// and the FRW mode equation
//   a^4(t) k^2 + zeta a^6(t) R(t),
// as explicit coefficient functions on a shared grid. Reconstructing
// omega_sq from the paired coefficients reproduces the trap profile exactly;
// max_roundtrip_error records the largest deviation found on the grid.
struct AnalogyMap {
    std::vector<double> t;
    std::vector<double> mode_coefficient;   // pairs with a^4(t); equals 1/b^3(t)
    std::vector<double> mode_independent;   // pairs with zeta a^6 R; equals omega_ax^2(t)
    double k_sq_equivalent = 0.0;           // pairs with k^2; omega_ax^2(0) omega_kappa^2
    double max_roundtrip_error = 0.0;
    std::vector<std::string> dictionary;    // human-readable pairing records
};

AnalogyMap analogy_map(const TrapRamp& ramp, double omega_kappa_sq,
                       const ScaleFactorSolution& scale, int n_grid = 513);

} // namespace ioncosmo
