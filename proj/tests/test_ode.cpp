#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ioncosmo/errors.hpp"
#include "ioncosmo/ode.hpp"

using namespace ioncosmo;

namespace {

const ode::Rhs harmonic = [](double, const ode::State& y, ode::State& dydt) {
    dydt[0] = y[1];
    dydt[1] = -y[0];
};

} // namespace

TEST_CASE("harmonic oscillator returns to its start after a full period") {
    ode::Options opt;
    opt.rtol = 1e-10;
    ode::State y = ode::integrate(harmonic, {1.0, 0.0}, 0.0, 2.0 * M_PI, opt);
    CHECK(std::abs(y[0] - 1.0) <= 1e-9);
    CHECK(std::abs(y[1]) <= 1e-9);
}

TEST_CASE("tighter tolerance shrinks the global error") {
    auto err_at = [](double rtol) {
        ode::Options opt;
        opt.rtol = rtol;
        opt.atol = rtol * 1e-2;
        ode::State y = ode::integrate(harmonic, {1.0, 0.0}, 0.0, 20.0, opt);
        return std::hypot(y[0] - std::cos(20.0), y[1] + std::sin(20.0));
    };
    const double coarse = err_at(1e-6);
    const double fine = err_at(1e-10);
    CHECK(fine < coarse);
    CHECK(fine <= 1e-8);
}

TEST_CASE("dense output matches the closed-form solution between steps") {
    std::vector<double> sample_times;
    for (int k = 0; k <= 64; ++k) sample_times.push_back(10.0 * k / 64.0);

    std::vector<double> ts;
    double worst = 0.0;
    ode::Options opt;
    opt.rtol = 1e-10;
    ode::integrate(
        harmonic, {0.0, 1.0}, 0.0, 10.0, opt, sample_times,
        [&](double t, const ode::State& y) {
            ts.push_back(t);
            worst = std::max(worst, std::abs(y[0] - std::sin(t)));
        });

    REQUIRE(ts.size() == sample_times.size());
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK(ts[i] == sample_times[i]);
    // Interpolation order is one below the stepper, so allow a looser bound
    // than the endpoint error.
    CHECK(worst <= 1e-8);
}

TEST_CASE("exponential decay endpoint accuracy") {
    const ode::Rhs decay = [](double, const ode::State& y, ode::State& dydt) {
        dydt[0] = -y[0];
    };
    ode::Options opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;
    ode::State y = ode::integrate(decay, {1.0}, 0.0, 5.0, opt);
    CHECK(std::abs(y[0] - std::exp(-5.0)) <= 1e-12);
}

TEST_CASE("segmented integration handles a frequency jump exactly at the cut") {
    // omega jumps from 1 to 3 at t = 1; integrating the pieces separately is
    // the reference.
    const ode::Rhs kinked = [](double t, const ode::State& y, ode::State& dydt) {
        const double w = t < 1.0 ? 1.0 : 3.0;
        dydt[0] = y[1];
        dydt[1] = -w * w * y[0];
    };
    ode::Options opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;

    const std::vector<double> cuts{1.0};
    ode::State seg = ode::integrate_segmented(kinked, {1.0, 0.0}, 0.0, 2.0, cuts, opt);

    ode::State mid = ode::integrate(harmonic, {1.0, 0.0}, 0.0, 1.0, opt);
    // Closed form from t = 1 with omega = 3.
    const double c = std::cos(3.0), s = std::sin(3.0);
    const double y0 = mid[0] * c + mid[1] / 3.0 * s;
    const double y1 = -3.0 * mid[0] * s + mid[1] * c;

    CHECK(std::abs(seg[0] - y0) <= 1e-10);
    CHECK(std::abs(seg[1] - y1) <= 1e-10);

    // Breakpoints outside the span are ignored.
    const std::vector<double> outside{-1.0, 5.0};
    ode::State plain = ode::integrate_segmented(kinked, {1.0, 0.0}, 0.0, 0.5, outside, opt);
    ode::State direct = ode::integrate(kinked, {1.0, 0.0}, 0.0, 0.5, opt);
    CHECK(std::abs(plain[0] - direct[0]) <= 1e-13);
}

TEST_CASE("statistics are reported") {
    ode::Options opt;
    opt.rtol = 1e-8;
    ode::Stats stats;
    ode::integrate(harmonic, {1.0, 0.0}, 0.0, 6.0, opt, {}, nullptr, &stats);
    CHECK(stats.steps_accepted > 0);
    CHECK(stats.rhs_evaluations > stats.steps_accepted);
}

TEST_CASE("invalid spans and exhausted step budgets raise errors") {
    ode::Options opt;
    CHECK_THROWS_AS(ode::integrate(harmonic, {1.0, 0.0}, 1.0, 0.0, opt), Error);

    ode::Options tiny;
    tiny.rtol = 1e-12;
    tiny.max_steps = 3;
    try {
        ode::integrate(harmonic, {1.0, 0.0}, 0.0, 100.0, tiny);
        FAIL("expected the step budget to be exhausted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoConvergence);
    }
}
