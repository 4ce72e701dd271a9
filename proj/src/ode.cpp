#include "ioncosmo/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ioncosmo/errors.hpp"

namespace ioncosmo::ode {

namespace {

// Dormand-Prince 5(4) tableau, FSAL form: stage 7 equals the next step's
// stage 1 when the step is accepted.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;

constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;

// 5th-order minus embedded 4th-order weights.
constexpr double e1 = b1 - 5179.0 / 57600.0;
constexpr double e3 = b3 - 7571.0 / 16695.0;
constexpr double e4 = b4 - 393.0 / 640.0;
constexpr double e5 = b5 + 92097.0 / 339200.0;
constexpr double e6 = b6 - 187.0 / 2100.0;
constexpr double e7 = -1.0 / 40.0;

// Dense-output weights for the 4th-order continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct DenseStep {
    // y(t0 + theta h) = r1 + theta (r2 + (1-theta)(r3 + theta (r4 + (1-theta) r5)))
    std::vector<State> r; // r[0..4]
    double t0 = 0.0;
    double h = 0.0;

    void eval(double t, State& out) const {
        const double theta = (t - t0) / h;
        const double omt = 1.0 - theta;
        const std::size_t n = r[0].size();
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = r[0][i] +
                     theta * (r[1][i] + omt * (r[2][i] + theta * (r[3][i] + omt * r[4][i])));
        }
    }
};

double initial_step(const Rhs& f, double t0, const State& y0, const State& f0,
                    double t_end, const Options& opt, Stats* stats) {
    const std::size_t n = y0.size();
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sk = opt.atol + opt.rtol * std::abs(y0[i]);
        dnf += (f0[i] / sk) * (f0[i] / sk);
        dny += (y0[i] / sk) * (y0[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, t_end - t0);

    State y1(n), f1(n);
    for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + h * f0[i];
    f(t0 + h, y1, f1);
    if (stats) ++stats->rhs_evaluations;

    double der2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sk = opt.atol + opt.rtol * std::abs(y0[i]);
        der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;

    const double der12 = std::max(der2, std::sqrt(dnf));
    double h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3)
                                 : std::pow(0.01 / der12, 0.2);
    h = std::min({100.0 * h, h1, t_end - t0});
    if (opt.h_max > 0.0) h = std::min(h, opt.h_max);
    return h;
}

} // namespace

State integrate(const Rhs& f, State y0, double t0, double t1, const Options& opt,
                std::span<const double> sample_times, const SampleSink& on_sample,
                Stats* stats) {
    require(t1 > t0, ErrorCode::InvalidArgument, "ode: t1 must exceed t0");
    require(opt.rtol > 0.0 && opt.atol > 0.0, ErrorCode::InvalidArgument,
            "ode: tolerances must be positive");
    const std::size_t n = y0.size();
    require(n > 0, ErrorCode::InvalidArgument, "ode: empty state");

    std::size_t next_sample = 0;
    while (next_sample < sample_times.size() && sample_times[next_sample] < t0)
        ++next_sample;
    // Samples exactly at t0 use the initial state directly.
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
        if (on_sample) on_sample(t0, y0);
        ++next_sample;
    }

    State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    State ytmp(n), y1(n), yerr(n);
    DenseStep dense;
    dense.r.assign(5, State(n));
    State sample_buf(n);

    f(t0, y0, k1);
    if (stats) ++stats->rhs_evaluations;

    double t = t0;
    double h = initial_step(f, t0, y0, k1, t1, opt, stats);

    const double safety = 0.9;
    const double fac_min = 0.2;
    const double fac_max0 = 10.0;
    double fac_max = fac_max0;
    long steps = 0;

    while (t < t1) {
        require(steps++ < opt.max_steps, ErrorCode::NoConvergence,
                "ode: step limit reached");
        h = std::min(h, t1 - t);
        require(t + h > t, ErrorCode::NoConvergence, "ode: step size underflow");

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y0[i] + h * a21 * k1[i];
        f(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y0[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y0[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y0[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y0[i] +
                      h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            y1[i] = y0[i] +
                    h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(t + h, y1, k7);
        if (stats) stats->rhs_evaluations += 6;

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                           e6 * k6[i] + e7 * k7[i]);
            const double sk = opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
            err += (yerr[i] / sk) * (yerr[i] / sk);
        }
        err = std::sqrt(err / static_cast<double>(n));

        if (err <= 1.0) {
            if (stats) ++stats->steps_accepted;

            const bool need_dense = next_sample < sample_times.size() &&
                                    sample_times[next_sample] <= t + h && on_sample;
            if (need_dense) {
                dense.t0 = t;
                dense.h = h;
                for (std::size_t i = 0; i < n; ++i) {
                    const double dy = y1[i] - y0[i];
                    const double bspl = h * k1[i] - dy;
                    dense.r[0][i] = y0[i];
                    dense.r[1][i] = dy;
                    dense.r[2][i] = bspl;
                    dense.r[3][i] = dy - h * k7[i] - bspl;
                    dense.r[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                                         d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
                }
                while (next_sample < sample_times.size() &&
                       sample_times[next_sample] <= t + h) {
                    dense.eval(sample_times[next_sample], sample_buf);
                    on_sample(sample_times[next_sample], sample_buf);
                    ++next_sample;
                }
            } else {
                while (next_sample < sample_times.size() &&
                       sample_times[next_sample] <= t + h)
                    ++next_sample;
            }

            t += h;
            y0.swap(y1);
            k1.swap(k7);

            double fac = safety * std::pow(err > 0.0 ? err : 1e-30, -0.2);
            fac = std::clamp(fac, fac_min, fac_max);
            h *= fac;
            if (opt.h_max > 0.0) h = std::min(h, opt.h_max);
            fac_max = fac_max0;
        } else {
            if (stats) ++stats->steps_rejected;
            double fac = safety * std::pow(err, -0.2);
            h *= std::clamp(fac, fac_min, 1.0);
            fac_max = 1.0; // stay cautious right after a rejection
        }
    }

    if (on_sample) {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= t1) {
            on_sample(t1, y0);
            ++next_sample;
        }
    }
    return y0;
}

State integrate_segmented(const Rhs& f, State y0, double t0, double t1,
                          std::span<const double> breakpoints, const Options& opt,
                          std::span<const double> sample_times, const SampleSink& on_sample,
                          Stats* stats) {
    std::vector<double> cuts;
    cuts.push_back(t0);
    for (double b : breakpoints) {
        if (b > t0 + 1e-15 * (1.0 + std::abs(t0)) && b < t1 - 1e-15 * (1.0 + std::abs(t1)))
            cuts.push_back(b);
    }
    cuts.push_back(t1);
    require(std::is_sorted(cuts.begin(), cuts.end()), ErrorCode::InvalidArgument,
            "ode: breakpoints must be ascending");

    std::size_t si = 0;
    State y = std::move(y0);
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double a = cuts[seg];
        const double b = cuts[seg + 1];
        if (b <= a) continue;
        std::size_t lo = si;
        while (si < sample_times.size() && sample_times[si] <= b) ++si;
        y = integrate(f, std::move(y), a, b, opt,
                      sample_times.subspan(lo, si - lo), on_sample, stats);
    }
    return y;
}

} // namespace ioncosmo::ode
