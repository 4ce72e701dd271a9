#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ioncosmo/errors.hpp"
#include "ioncosmo/fock.hpp"
#include "ioncosmo/readout.hpp"

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

FockDistribution numeric_dist(std::vector<double> p) {
    FockDistribution d;
    d.p = std::move(p);
    d.kind = StateKind::Numeric;
    return d;
}

} // namespace

TEST_CASE("coupling strengths against hand-evaluated Laguerre values") {
    // Zero Lamb-Dicke parameter: unit carrier, dead sidebands.
    for (int n = 0; n < 5; ++n) {
        CHECK(rabi_coupling(n, 0, 0.0) == 1.0);
        CHECK(rabi_coupling(n + 1, 1, 0.0) == 0.0);
    }

    const double eta = 0.3;
    const double x = eta * eta; // 0.09
    const double dw = std::exp(-x / 2.0);
    CHECK(std::abs(rabi_coupling(0, 0, eta) - dw) <= 1e-15);
    CHECK(std::abs(rabi_coupling(1, 0, eta) - dw * (1.0 - x)) <= 1e-15);
    CHECK(std::abs(rabi_coupling(2, 0, eta) - dw * (1.0 - 2.0 * x + x * x / 2.0)) <= 1e-15);
    CHECK(std::abs(rabi_coupling(1, 1, eta) - dw * eta) <= 1e-15);
    CHECK(std::abs(rabi_coupling(2, 1, eta) - dw * eta * (2.0 - x) / std::sqrt(2.0)) <= 1e-15);
    CHECK(std::abs(rabi_coupling(2, 2, eta) - dw * x / std::sqrt(2.0)) <= 1e-15);

    // Below the sideband order there is no partner level.
    CHECK(rabi_coupling(0, 1, eta) == 0.0);
    CHECK(rabi_coupling(1, 2, eta) == 0.0);

    CHECK(code_of([&] { rabi_coupling(2, 1, 1.0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { rabi_coupling(2, 1, -0.1); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { rabi_coupling(-1, 0, 0.3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("standard sequences are pi pulses on their designated pair") {
    const double eta = 0.3;
    std::vector<PulseSpec> a = standard_sequence('a', eta);
    REQUIRE(a.size() == 2);
    CHECK(a[0].kind == PulseKind::Rsb2);
    CHECK(a[1].kind == PulseKind::Carrier);
    // 2 pi * duration * coupling = pi on the probed transition.
    CHECK(std::abs(2.0 * a[0].duration * rabi_coupling(2, 2, eta) - 1.0) <= 1e-14);
    CHECK(std::abs(2.0 * a[1].duration * rabi_coupling(0, 0, eta) - 1.0) <= 1e-14);
    CHECK(a[0].eta == eta);

    std::vector<PulseSpec> b = standard_sequence('b', eta);
    REQUIRE(b.size() == 2);
    CHECK(b[0].kind == PulseKind::Rsb1);
    CHECK(std::abs(2.0 * b[0].duration * rabi_coupling(1, 1, eta) - 1.0) <= 1e-14);

    CHECK(code_of([&] { standard_sequence('x', eta); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { standard_sequence('a', 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("ideal pulses read the probed population exactly") {
    FockDistribution d = numeric_dist({0.35, 0.3, 0.2, 0.15});
    const double eta = 0.3;

    ReadoutOutcome a = apply_sequence(d, standard_sequence('a', eta), PulseMode::IdealPi);
    CHECK(a.bright_probability == d.p[2]);
    ReadoutOutcome b = apply_sequence(d, standard_sequence('b', eta), PulseMode::IdealPi);
    CHECK(b.bright_probability == d.p[1]);

    // Transfer function is the indicator of the probed level.
    for (std::size_t n = 0; n < a.per_n_transfer.size(); ++n) {
        CHECK(a.per_n_transfer[n] == (n == 2 ? 1.0 : 0.0));
        CHECK(b.per_n_transfer[n] == (n == 1 ? 1.0 : 0.0));
    }

    double mass = 0.0;
    for (double v : a.down_populations) mass += v;
    for (double v : a.up_populations) mass += v;
    CHECK(std::abs(mass - 1.0) <= 1e-14);
}

TEST_CASE("finite-duration pulses: exact bright fraction on a three-level state") {
    // With support on n <= 2 the two-quanta probe is exact up to the carrier
    // underrotating n = 1 by pi eta^2: bright = p2 + p1 sin^2(pi eta^2 / 2).
    const double eta = 0.3;
    FockDistribution d = numeric_dist({0.5, 0.3, 0.2});

    ReadoutOutcome out =
        apply_sequence(d, standard_sequence('a', eta), PulseMode::RabiDynamics);
    const double leak = std::sin(std::numbers::pi * eta * eta / 2.0);
    const double expected = d.p[2] + d.p[1] * leak * leak;
    CHECK(std::abs(out.bright_probability - expected) <= 1e-12);

    // The leak vanishes quadratically with eta.
    ReadoutOutcome tight =
        apply_sequence(d, standard_sequence('a', 0.1), PulseMode::RabiDynamics);
    CHECK(std::abs(tight.bright_probability - d.p[2]) <
          std::abs(out.bright_probability - d.p[2]));
}

TEST_CASE("bright probability is linear in the populations") {
    const double eta = 0.25;
    std::vector<PulseSpec> seq = standard_sequence('a', eta);
    FockDistribution d = numeric_dist({0.1, 0.25, 0.3, 0.2, 0.15});
    ReadoutOutcome out = apply_sequence(d, seq, PulseMode::RabiDynamics);

    double predicted = 0.0;
    for (std::size_t n = 0; n < d.p.size(); ++n)
        predicted += d.p[n] * out.per_n_transfer[n];
    CHECK(std::abs(out.bright_probability - predicted) <= 1e-15);
}

TEST_CASE("detection sampling is reproducible and unbiased") {
    CHECK(sample_detection(0.37, 5000, 42) == sample_detection(0.37, 5000, 42));
    CHECK(sample_detection(0.37, 5000, 42) != sample_detection(0.37, 5000, 43));
    CHECK(sample_detection(0.0, 1000, 1) == 0);
    CHECK(sample_detection(1.0, 1000, 1, 1.0) == 1000);
    CHECK(sample_detection(0.5, 0, 1) == 0);

    // 5 sigma band around the expected count.
    const std::uint64_t trials = 10000;
    const double p = 0.3;
    const double sigma = std::sqrt(p * (1.0 - p) * trials);
    const double count = static_cast<double>(sample_detection(p, trials, 7));
    CHECK(std::abs(count - p * trials) <= 5.0 * sigma);

    // Efficiency multiplies the bright rate.
    const double eff_count = static_cast<double>(sample_detection(1.0, trials, 7, 0.5));
    CHECK(std::abs(eff_count - 5000.0) <= 5.0 * 50.0);

    CHECK(code_of([&] { sample_detection(1.5, 10, 1); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { sample_detection(0.5, 10, 1, 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("population input must be a distribution") {
    FockDistribution half = numeric_dist({0.25, 0.25});
    CHECK(code_of([&] {
        apply_sequence(half, standard_sequence('a', 0.3), PulseMode::IdealPi);
    }) == ErrorCode::NotNormalized);

    FockDistribution empty;
    CHECK(code_of([&] {
        apply_sequence(empty, standard_sequence('a', 0.3), PulseMode::IdealPi);
    }) == ErrorCode::InvalidArgument);
}
