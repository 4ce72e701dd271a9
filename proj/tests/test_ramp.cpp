#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ioncosmo/errors.hpp"
#include "ioncosmo/ramp.hpp"

using namespace ioncosmo;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return static_cast<ErrorCode>(0);
}

TrapRamp base(RampShape shape) {
    TrapRamp r;
    r.omega_initial = 2.0;
    r.omega_final = 6.0;
    r.rise_time = 1.5;
    r.shape = shape;
    r.head_hold = 1.0;
    r.tail_hold = 2.0;
    return r;
}

} // namespace

TEST_CASE("tanh transition: the 10 to 90 percent transit spans rise_time") {
    TrapRamp r = base(RampShape::Tanh);
    const double w = r.window();
    CHECK(w > r.rise_time);

    const double lo = r.omega_initial, hi = r.omega_final;
    const double t10 = r.ramp_start() + (w - r.rise_time) / 2.0;
    const double t90 = t10 + r.rise_time;
    CHECK(std::abs(r.omega(t10) - (lo + 0.1 * (hi - lo))) <= 1e-12);
    CHECK(std::abs(r.omega(t90) - (lo + 0.9 * (hi - lo))) <= 1e-12);

    // Midpoint symmetry and exactly pinned endpoints.
    CHECK(std::abs(r.omega(r.ramp_start() + w / 2.0) - (lo + hi) / 2.0) <= 1e-12);
    CHECK(r.omega(r.ramp_start()) == lo);
    CHECK(r.omega(r.ramp_end()) == hi);
    CHECK(r.omega(0.0) == lo);
    CHECK(r.omega(r.total_time() + 5.0) == hi);
}

TEST_CASE("linear and exponential midpoints") {
    TrapRamp lin = base(RampShape::Linear);
    const double tm = lin.ramp_start() + lin.window() / 2.0;
    CHECK(std::abs(lin.omega(tm) - 4.0) <= 1e-12);

    TrapRamp expo = base(RampShape::Exponential);
    const double tg = expo.ramp_start() + expo.window() / 2.0;
    CHECK(std::abs(expo.omega(tg) - std::sqrt(2.0 * 6.0)) <= 1e-12);

    // Both use the same 10-90 window scaling: the full window is rise / 0.8.
    CHECK(std::abs(lin.window() - lin.rise_time / 0.8) <= 1e-15);
}

TEST_CASE("step ramps jump right-continuously and have zero window") {
    TrapRamp r = base(RampShape::Step);
    CHECK(r.window() == 0.0);
    CHECK(r.ramp_start() == r.ramp_end());
    CHECK(r.omega(r.ramp_start() - 1e-12) == r.omega_initial);
    CHECK(r.omega(r.ramp_start()) == r.omega_final);
}

TEST_CASE("omega_sq is the square of omega") {
    TrapRamp r = base(RampShape::Tanh);
    for (double t : {0.0, 1.2, 2.0, 4.0}) {
        const double w = r.omega(t);
        CHECK(r.omega_sq(t) == w * w);
    }
}

TEST_CASE("preparation leg precedes the head hold") {
    TrapRamp r = base(RampShape::Tanh);
    r.prep_omega = 8.0;
    r.prep_time = 2.0;
    r.prep_hold = 0.5;
    r.validate();

    CHECK(r.has_prep());
    CHECK(r.omega_in() == 8.0);
    CHECK(r.omega(0.0) == 8.0);
    CHECK(r.omega(r.prep_start()) == 8.0);
    CHECK(r.omega(r.prep_end()) == r.omega_initial);
    // Head hold sits between the prep transition and the main one.
    CHECK(r.ramp_start() == r.prep_end() + r.head_hold);
    CHECK(r.omega(r.prep_end() + r.head_hold / 2.0) == r.omega_initial);

    std::vector<double> pts = r.breakpoints();
    REQUIRE(pts.size() >= 2);
    CHECK(pts.front() == 0.0);
    CHECK(pts.back() == r.total_time());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) CHECK(pts[i] < pts[i + 1]);
}

TEST_CASE("schedules without prep report omega_initial as the in frequency") {
    TrapRamp r = base(RampShape::Tanh);
    CHECK(!r.has_prep());
    CHECK(r.omega_in() == r.omega_initial);
    CHECK(r.prep_window() == 0.0);
    CHECK(r.prep_end() == 0.0);
}

TEST_CASE("validation rejects nonsense schedules") {
    TrapRamp r = base(RampShape::Tanh);
    r.omega_initial = -1.0;
    CHECK(code_of([&] { r.validate(); }) == ErrorCode::InvalidArgument);

    r = base(RampShape::Tanh);
    r.rise_time = 0.0;
    CHECK(code_of([&] { r.validate(); }) == ErrorCode::InvalidArgument);

    r = base(RampShape::Step);
    r.rise_time = 0.0;
    CHECK(code_of([&] { r.validate(); }) == static_cast<ErrorCode>(0));

    r = base(RampShape::Tanh);
    r.head_hold = -0.1;
    CHECK(code_of([&] { r.validate(); }) == ErrorCode::InvalidArgument);

    r = base(RampShape::Tanh);
    r.prep_omega = 3.0;
    r.prep_time = 0.0;
    CHECK(code_of([&] { r.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("shape names round-trip and unknown names are parse errors") {
    for (RampShape s : {RampShape::Linear, RampShape::Tanh, RampShape::Exponential,
                        RampShape::Step})
        CHECK(ramp_shape_from_name(ramp_shape_name(s)) == s);
    CHECK(code_of([] { ramp_shape_from_name("sigmoid"); }) == ErrorCode::Parse);
}

TEST_CASE("transit fraction is the inverse of the window scaling") {
    TrapRamp r = base(RampShape::Tanh);
    CHECK(std::abs(r.window() * tanh_window_transit_fraction() - r.rise_time) <= 1e-15);
    CHECK(tanh_window_transit_fraction() > 0.2);
    CHECK(tanh_window_transit_fraction() < 0.35);
}
