#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ioncosmo/fock.hpp"

namespace ioncosmo {

// Two-level ion with a single motional mode, driven on the carrier or a red
// sideband in the resolved-sideband, Lamb-Dicke-expanded regime.

// |coupling| of |down, n> <-> |up, n - m> relative to the bare Rabi frequency:
// exp(-eta^2/2) eta^m sqrt((n-m)!/n!) |L_{n-m}^{(m)}(eta^2)|.
// m = 0 is the carrier. Returns 0 for n < m. Valid for 0 <= eta < 1.
double rabi_coupling(int n, int m, double eta);

enum class PulseKind { Carrier, Rsb1, Rsb2 };
enum class PulseMode {
    IdealPi,      // designated transition swaps exactly; carrier flips every level
    RabiDynamics, // every pair rotates by its own coupling-weighted angle
};

struct PulseSpec {
    PulseKind kind = PulseKind::Carrier;
    // Pulse length in units of the base Rabi period: the pair (n, m) rotates
    // by 2 pi * duration * rabi_coupling(n, m, eta). Ignored by IdealPi.
    double duration = 0.0;
    double eta = 0.1;
};

// Pulse pair used by the population probes: first_pulse 'a' is a second red
// sideband tuned to |down,2> -> |up,0>, 'b' a first red sideband tuned to
// |down,1> -> |up,0>; both are followed by a carrier pi pulse. Durations are
// set to pi on the designated transition.
std::vector<PulseSpec> standard_sequence(char first_pulse, double eta);

struct ReadoutOutcome {
    double bright_probability = 0.0;      // P(spin down) after the sequence
    std::vector<double> down_populations; // per-n spin-down populations
    std::vector<double> up_populations;   // per-n spin-up populations
    // per_n_transfer[n]: probability that an ion starting in |down, n> ends
    // bright under the same sequence. For a diagonal input,
    // bright_probability = sum_n p[n] * per_n_transfer[n] exactly.
    std::vector<double> per_n_transfer;
};

// Applies the pulse list to the spin-down ion with motional populations dist
// (density-matrix evolution; pulses are exact 2x2 rotations on disjoint
// level pairs). Detection marks spin-down as bright: the sequences above park
// the probed level in spin down and flip everything else to spin up.
ReadoutOutcome apply_sequence(const FockDistribution& dist,
                              const std::vector<PulseSpec>& pulses, PulseMode mode);

// Bernoulli detection: counts bright outcomes over `trials` shots where each
// shot registers bright with probability bright_probability *
// detection_efficiency. Deterministic for fixed seed.
std::uint64_t sample_detection(double bright_probability, std::uint64_t trials,
                               std::uint64_t seed, double detection_efficiency = 1.0);

inline std::uint64_t sample_detection(const ReadoutOutcome& outcome, std::uint64_t trials,
                                      std::uint64_t seed,
                                      double detection_efficiency = 1.0) {
    return sample_detection(outcome.bright_probability, trials, seed,
                            detection_efficiency);
}

const char* pulse_kind_name(PulseKind kind);

} // namespace ioncosmo
