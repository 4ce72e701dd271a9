#include "ioncosmo/ramp.hpp"

#include <cmath>

#include "ioncosmo/errors.hpp"

namespace ioncosmo {

namespace {

constexpr double kTanhSpan = 4.0; // tanh argument runs over [-kTanhSpan, kTanhSpan]

// Value of the transition profile at progress s in [0, 1]; exact at the ends.
double shaped_value(RampShape shape, double from, double to, double s) {
    switch (shape) {
        case RampShape::Linear:
            return from + (to - from) * s;
        case RampShape::Tanh: {
            const double x = kTanhSpan * (2.0 * s - 1.0);
            const double sigma =
                (std::tanh(x) + std::tanh(kTanhSpan)) / (2.0 * std::tanh(kTanhSpan));
            return from + (to - from) * sigma;
        }
        case RampShape::Exponential:
            return from * std::pow(to / from, s);
        case RampShape::Step:
            return to;
    }
    return to;
}

double shape_window(RampShape shape, double rise_time) {
    switch (shape) {
        case RampShape::Step: return 0.0;
        case RampShape::Tanh: return rise_time / tanh_window_transit_fraction();
        case RampShape::Linear:
        case RampShape::Exponential: return rise_time / 0.8;
    }
    return 0.0;
}

} // namespace

const char* ramp_shape_name(RampShape shape) {
    switch (shape) {
        case RampShape::Linear: return "linear";
        case RampShape::Tanh: return "tanh";
        case RampShape::Exponential: return "exponential";
        case RampShape::Step: return "step";
    }
    return "?";
}

RampShape ramp_shape_from_name(const std::string& name) {
    if (name == "linear") return RampShape::Linear;
    if (name == "tanh") return RampShape::Tanh;
    if (name == "exponential") return RampShape::Exponential;
    if (name == "step") return RampShape::Step;
    fail(ErrorCode::Parse, "unknown ramp shape '" + name + "'");
}

double tanh_window_transit_fraction() {
    // Solve sigma(x) = 0.9 for the rescaled profile
    // sigma(x) = (tanh(x) + tanh(X)) / (2 tanh(X)); by symmetry the 10% point
    // sits at -x90, so the transit covers 2 x90 out of the 2 X window.
    static const double fraction = std::atanh(0.8 * std::tanh(kTanhSpan)) / kTanhSpan;
    return fraction;
}

void TrapRamp::validate() const {
    require(std::isfinite(omega_initial) && omega_initial > 0.0,
            ErrorCode::InvalidArgument, "ramp: omega_initial must be positive");
    require(std::isfinite(omega_final) && omega_final > 0.0,
            ErrorCode::InvalidArgument, "ramp: omega_final must be positive");
    require(std::isfinite(head_hold) && head_hold >= 0.0,
            ErrorCode::InvalidArgument, "ramp: head_hold must be >= 0");
    require(std::isfinite(tail_hold) && tail_hold >= 0.0,
            ErrorCode::InvalidArgument, "ramp: tail_hold must be >= 0");
    if (shape == RampShape::Step) {
        require(std::isfinite(rise_time) && rise_time >= 0.0,
                ErrorCode::InvalidArgument, "ramp: rise_time must be >= 0");
    } else {
        require(std::isfinite(rise_time) && rise_time > 0.0,
                ErrorCode::InvalidArgument, "ramp: rise_time must be positive");
    }
    require(std::isfinite(prep_omega) && prep_omega >= 0.0,
            ErrorCode::InvalidArgument, "ramp: prep_omega must be >= 0 (0 disables)");
    if (has_prep()) {
        require(std::isfinite(prep_hold) && prep_hold >= 0.0,
                ErrorCode::InvalidArgument, "ramp: prep_hold must be >= 0");
        if (shape == RampShape::Step) {
            require(std::isfinite(prep_time) && prep_time >= 0.0,
                    ErrorCode::InvalidArgument, "ramp: prep_time must be >= 0");
        } else {
            require(std::isfinite(prep_time) && prep_time > 0.0,
                    ErrorCode::InvalidArgument, "ramp: prep_time must be positive");
        }
    }
}

double TrapRamp::window() const { return shape_window(shape, rise_time); }

double TrapRamp::prep_window() const {
    return has_prep() ? shape_window(shape, prep_time) : 0.0;
}

double TrapRamp::omega(double t) const {
    // Step transitions are right-continuous at their jumps.
    if (t >= ramp_end()) return omega_final;
    if (t >= ramp_start()) {
        const double w = window();
        if (w <= 0.0) return omega_final;
        return shaped_value(shape, omega_initial, omega_final, (t - ramp_start()) / w);
    }
    if (!has_prep()) return omega_initial;
    if (t >= prep_end()) return omega_initial;
    if (t >= prep_start()) {
        const double w = prep_window();
        if (w <= 0.0) return omega_initial;
        return shaped_value(shape, prep_omega, omega_initial, (t - prep_start()) / w);
    }
    return prep_omega;
}

double TrapRamp::omega_sq(double t) const {
    const double w = omega(t);
    return w * w;
}

std::vector<double> TrapRamp::breakpoints() const {
    std::vector<double> pts{0.0};
    auto push = [&pts](double t) {
        if (t > pts.back()) pts.push_back(t);
    };
    if (has_prep()) {
        push(prep_start());
        push(prep_end());
    }
    push(ramp_start());
    push(ramp_end());
    push(total_time());
    return pts;
}

} // namespace ioncosmo
