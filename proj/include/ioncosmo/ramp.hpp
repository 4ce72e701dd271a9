#pragma once

#include <string>
#include <vector>

namespace ioncosmo {

enum class RampShape { Linear, Tanh, Exponential, Step };

const char* ramp_shape_name(RampShape shape);
RampShape ramp_shape_from_name(const std::string& name);

// Piecewise axial-frequency schedule: flat head hold at omega_initial, one
// monotone transition window, flat tail hold at omega_final. Frequencies are
// angular and dimensionless (the caller fixes the unit system). rise_time is
// the 10%-90% transit time of the frequency change; the full window is wider
// for the smooth shapes and zero for step.
//
// An optional preparation leg can precede the main transition: hold at
// prep_omega, move to omega_initial over prep_time (same shape), then the
// usual head hold. prep_omega == 0 disables the leg. With the leg enabled the
// in-state is defined on the initial hold at prep_omega.
struct TrapRamp {
    double omega_initial = 1.0;
    double omega_final = 1.0;
    double rise_time = 1.0;
    RampShape shape = RampShape::Tanh;
    double head_hold = 0.0;
    double tail_hold = 0.0;

    double prep_omega = 0.0;
    double prep_time = 0.0;
    double prep_hold = 0.0;

    bool has_prep() const { return prep_omega > 0.0; }
    double omega_in() const { return has_prep() ? prep_omega : omega_initial; }

    void validate() const;

    double prep_window() const;               // full width of the prep transition
    double prep_start() const { return has_prep() ? prep_hold : 0.0; }
    double prep_end() const { return prep_start() + prep_window(); }

    double window() const;                    // full width of the main transition
    double ramp_start() const { return prep_end() + head_hold; }
    double ramp_end() const { return ramp_start() + window(); }
    double total_time() const { return ramp_end() + tail_hold; }

    double omega(double t) const;             // clamped outside [0, total_time]
    double omega_sq(double t) const;

    // Times where the schedule is only piecewise smooth; integrators restart
    // here. Includes 0 and total_time().
    std::vector<double> breakpoints() const;
};

// Fraction of a clipped-tanh window covered by the 10%-90% transit. The window
// uses tanh over [-X, X] with X = 4, rescaled to pass exactly through the
// endpoint values.
double tanh_window_transit_fraction();

} // namespace ioncosmo
