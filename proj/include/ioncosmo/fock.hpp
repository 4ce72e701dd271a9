#pragma once

#include <vector>

#include "ioncosmo/linalg.hpp"
#include "ioncosmo/modeqn.hpp"

namespace ioncosmo {

enum class StateKind { Thermal, SqueezedVacuum, SqueezedThermal, Numeric };

// Number-basis populations of a single mode. p[n] is the probability of n
// quanta; tail_bound is (at least) the probability mass beyond the truncation.
struct FockDistribution {
    std::vector<double> p;
    double tail_bound = 0.0;
    StateKind kind = StateKind::Numeric;

    int n_max() const { return static_cast<int>(p.size()) - 1; }
    double mean() const;
    double probability(int n) const {
        return (n >= 0 && n < static_cast<int>(p.size())) ? p[n] : 0.0;
    }
};

// n_max <= 0 requests automatic truncation: the smallest cutoff (up to 1024)
// whose neglected tail is below 1e-12.
FockDistribution thermal_distribution(double mean_n, int n_max = 0);

// Squeezed vacuum with squeezing magnitude r = |xi|. Only even levels are
// populated: P(0) = 1/cosh r, P(2m)/P(2m-2) = ((2m-1)/(2m)) tanh^2 r.
// Populations depend on |xi| only, so the phase is not an argument.
FockDistribution squeezed_vacuum_distribution(double xi_mag, int n_max = 0);

// Thermal state squeezed by |xi|: diagonal of S rho_thermal S^T in the number
// basis, with S built from the matrix exponential of the squeeze generator.
FockDistribution squeezed_thermal_distribution(double xi_mag, double thermal_mean_n,
                                               int n_max = 0);

// Number-basis matrix of exp((r/2)(a^2 - a^dag^2)), dimension dim x dim,
// cropped from a build at twice the requested dimension. The build is
// orthogonal to roundoff; the crop is not: columns map to squeezed number
// states, so high-index columns keep less than unit mass within the kept
// rows. Callers must keep the occupied levels well below dim.
linalg::Matrix squeeze_operator_matrix(double r, int dim);

// Mean quanta of a squeezed thermal state: (n + 1/2) cosh(2r) - 1/2.
double squeezed_thermal_mean(double thermal_mean_n, double xi_mag);

// Sideband-asymmetry style discriminator: a squeezed vacuum puts more weight
// on n=2 than n=1, a thermal state never does.
struct ParityDiscriminator {
    double p1 = 0.0;
    double p2 = 0.0;
    double ratio = 0.0; // p2 / p1, infinity-safe
    bool squeezed_like = false;
};
ParityDiscriminator compare_p2_p1(const FockDistribution& dist);

// 1/2 sum |p - q| including the truncated tails as unassigned mass.
double total_variation(const FockDistribution& lhs, const FockDistribution& rhs);

// Reference quantum evolution: propagates the initial mixture column by
// column under H(t) = p^2/2 + omega_sq(t) x^2/2, written in the number basis
// of the head frequency, then re-expresses populations in the number basis of
// the tail frequency. Independent of the Bogoliubov route: no mode functions,
// no closed-form squeeze parameters. The propagator is a Chebyshev expansion
// of exp(-i H dt) with H frozen at step midpoints; steps are refined until
// the result is stable to tol in total variation.
struct FockOracleResult {
    FockDistribution dist;
    double unitarity_drift = 0.0; // max | ||psi||^2 - 1 | over evolved columns
    double refinement_gap = 0.0;  // TV distance between the last two refinements
    int steps_used = 0;
};
FockOracleResult evolve_fock_oracle(const FrequencyProfile& profile,
                                    const FockDistribution& initial, int n_max,
                                    double tol = 1e-6, double flat_tol = 1e-6);

} // namespace ioncosmo
