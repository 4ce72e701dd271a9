#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ioncosmo::ode {

using State = std::vector<double>;
using Rhs = std::function<void(double t, const State& y, State& dydt)>;
using SampleSink = std::function<void(double t, const State& y)>;

struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_max = 0.0; // 0 means no cap
    long max_steps = 20'000'000;
};

struct Stats {
    long steps_accepted = 0;
    long steps_rejected = 0;
    long rhs_evaluations = 0;
};

// Adaptive Dormand-Prince 5(4) with 4th-order dense output. Integrates from
// t0 to t1 (t1 > t0) and reports interpolated states at sample_times, which
// must be ascending and lie within [t0, t1]. Returns the state at t1.
State integrate(const Rhs& f, State y0, double t0, double t1, const Options& opt,
                std::span<const double> sample_times = {},
                const SampleSink& on_sample = nullptr, Stats* stats = nullptr);

// Same, but restarts the stepper at each interior breakpoint so integration
// never steps across a kink or jump in the right-hand side. breakpoints must
// be ascending; entries outside (t0, t1) are ignored.
State integrate_segmented(const Rhs& f, State y0, double t0, double t1,
                          std::span<const double> breakpoints, const Options& opt,
                          std::span<const double> sample_times = {},
                          const SampleSink& on_sample = nullptr, Stats* stats = nullptr);

} // namespace ioncosmo::ode
