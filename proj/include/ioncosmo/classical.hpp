#pragma once

#include <vector>

#include "ioncosmo/linalg.hpp"
#include "ioncosmo/ramp.hpp"

namespace ioncosmo {

// Breathing scale factor of a harmonically confined Coulomb chain: solves
// b'' + omega_ax^2(t) b = omega_ax^2(0) / b^2 from b(0)=1, b'(0)=0. Under this
// scaling ansatz every ion follows q_i(t) = b(t) q_i(0) exactly, for any N.
// Stored on a uniform grid with cubic Hermite interpolation between samples.
class ScaleFactorSolution {
public:
    ScaleFactorSolution() = default;
    ScaleFactorSolution(std::vector<double> t, std::vector<double> b,
                        std::vector<double> b_dot, double energy_drift);

    double value(double t) const;
    double deriv(double t) const;
    double operator()(double t) const { return value(t); }

    // Largest relative drift of the conserved energy
    // E = b'^2/2 + omega^2 b^2/2 + omega_0^2 / b over the flat head and tail,
    // where E is exactly conserved.
    double energy_drift() const { return energy_drift_; }

    double t_end() const { return t_.empty() ? 0.0 : t_.back(); }
    const std::vector<double>& times() const { return t_; }
    const std::vector<double>& values() const { return b_; }
    const std::vector<double>& derivs() const { return b_dot_; }

    // Equilibrium the tail motion oscillates around: (omega_i / omega_f)^(2/3)
    // for the final frequency.
    static double settled_value(double omega_initial, double omega_final);

private:
    std::vector<double> t_, b_, b_dot_;
    double energy_drift_ = 0.0;
};

struct ScaleFactorOptions {
    double rtol = 1e-10;
    int n_samples = 0;          // 0: choose from ramp duration and frequency
    double collapse_floor = 1e-6; // abort if b drops below this
};

ScaleFactorSolution integrate_scale_factor(const TrapRamp& ramp,
                                           const ScaleFactorOptions& opt = {});

// Full nonlinear chain integration (positions and velocities of every ion,
// Coulomb repulsion included) used to cross-check the scaling ansatz and the
// normal-mode decomposition. Positions are in equilibrium units of the
// initial trap.
struct ChainTrajectory {
    std::vector<double> t;
    linalg::Matrix q;     // row k: positions at t[k]
    linalg::Matrix q_dot; // row k: velocities at t[k]
    double energy_drift = 0.0; // relative drift on flat segments
};

struct ChainDynamicsOptions {
    double rtol = 1e-10;
    int n_samples = 513;
    double collision_floor = 1e-6; // minimum allowed ion separation
};

ChainTrajectory integrate_full_chain(const std::vector<double>& q0,
                                     const std::vector<double>& v0,
                                     const TrapRamp& ramp,
                                     const ChainDynamicsOptions& opt = {});

// Projects a trajectory onto a normal-mode coordinate: c_kappa(t) =
// sum_i u_i^kappa (q_i(t) - b(t) q_i^eq). With the scaling ansatz removed this
// isolates the residual mode motion.
std::vector<double> mode_coordinate(const ChainTrajectory& traj,
                                    const std::vector<double>& equilibrium,
                                    const ScaleFactorSolution& scale,
                                    const std::vector<double>& mode_vector);

// All mode coordinates at once; column kappa of the result is
// mode_coordinate(...) for eigenvector kappa of mode_vectors.
linalg::Matrix mode_projections(const ChainTrajectory& traj,
                                const std::vector<double>& equilibrium,
                                const ScaleFactorSolution& scale,
                                const linalg::Matrix& mode_vectors);

// Amplitude of the discrete Fourier transform of a uniformly sampled signal
// at one angular frequency (Goertzel-style probe used by the spectrum checks).
double spectral_amplitude(const std::vector<double>& t, const std::vector<double>& x,
                          double omega);

} // namespace ioncosmo
