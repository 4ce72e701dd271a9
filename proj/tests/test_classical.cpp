#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ioncosmo/chain.hpp"
#include "ioncosmo/classical.hpp"
#include "ioncosmo/errors.hpp"

using namespace ioncosmo;

namespace {

TrapRamp static_trap(double total) {
    TrapRamp r;
    r.omega_initial = 1.0;
    r.omega_final = 1.0;
    r.rise_time = 1.0;
    r.shape = RampShape::Tanh;
    r.head_hold = total / 2.0;
    r.tail_hold = total / 2.0;
    return r;
}

} // namespace

TEST_CASE("settled value closed form") {
    CHECK(std::abs(ScaleFactorSolution::settled_value(1.0, 8.0) - 0.25) <= 1e-15);
    CHECK(std::abs(ScaleFactorSolution::settled_value(1.0, 0.1) -
                   std::pow(10.0, 2.0 / 3.0)) <= 1e-12);
}

TEST_CASE("a static trap keeps the scale factor at one") {
    ScaleFactorSolution b = integrate_scale_factor(static_trap(10.0));
    for (double t : {0.0, 1.7, 5.0, 9.3}) {
        CHECK(std::abs(b.value(t) - 1.0) <= 1e-12);
        CHECK(std::abs(b.deriv(t)) <= 1e-11);
    }
    CHECK(b.energy_drift() <= 1e-10);
}

TEST_CASE("after a frequency step the turning points follow energy conservation") {
    // Step 1 -> 4: the scale factor oscillates between 1 and the root of
    // 8 b^2 + 8 b - 1, i.e. (sqrt(3/2) - 1) / 2.
    TrapRamp r;
    r.omega_initial = 1.0;
    r.omega_final = 4.0;
    r.rise_time = 0.0;
    r.shape = RampShape::Step;
    r.head_hold = 1.0;
    r.tail_hold = 12.0;

    ScaleFactorOptions opt;
    opt.rtol = 1e-11;
    opt.n_samples = 8193;
    ScaleFactorSolution b = integrate_scale_factor(r, opt);

    double lo = 1e300, hi = 0.0;
    for (double v : b.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double b_turn = (std::sqrt(1.5) - 1.0) / 2.0;
    CHECK(std::abs(lo - b_turn) <= 1e-4);
    CHECK(hi <= 1.0 + 1e-9);
    CHECK(b.energy_drift() <= 1e-8);
}

TEST_CASE("slow release lets the scale factor track the adiabatic minimum") {
    TrapRamp r;
    r.omega_initial = 1.0;
    r.omega_final = 0.1;
    r.rise_time = 200.0;
    r.shape = RampShape::Tanh;
    r.head_hold = 2.0;
    r.tail_hold = 2.0;
    ScaleFactorSolution b = integrate_scale_factor(r);
    const double target = std::pow(10.0, 2.0 / 3.0);
    CHECK(std::abs(b.value(b.t_end()) / target - 1.0) <= 0.01);
}

TEST_CASE("interpolation is stable against the sampling grid") {
    TrapRamp r;
    r.omega_initial = 1.0;
    r.omega_final = 2.0;
    r.rise_time = 1.0;
    r.shape = RampShape::Tanh;
    r.head_hold = 2.0;
    r.tail_hold = 4.0;
    ScaleFactorOptions coarse, fine;
    coarse.n_samples = 2049;
    fine.n_samples = 8193;
    ScaleFactorSolution bc = integrate_scale_factor(r, coarse);
    ScaleFactorSolution bf = integrate_scale_factor(r, fine);
    for (int i = 0; i <= 40; ++i) {
        const double t = r.total_time() * i / 40.0;
        CHECK(std::abs(bc.value(t) - bf.value(t)) <= 1e-8);
    }
}

TEST_CASE("a collapsing scale factor is reported rather than integrated through") {
    TrapRamp r;
    r.omega_initial = 1.0;
    r.omega_final = 100.0;
    r.rise_time = 0.0;
    r.shape = RampShape::Step;
    r.head_hold = 0.5;
    r.tail_hold = 3.0;
    ScaleFactorOptions opt;
    opt.collapse_floor = 1e-3; // the true turning point is near 2e-4
    try {
        integrate_scale_factor(r, opt);
        FAIL("expected the collapse guard to fire");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Collapse);
    }
}

TEST_CASE("ions starting at equilibrium follow the scale factor exactly") {
    ChainConfiguration chain = analyze_chain(2);
    TrapRamp r;
    r.omega_initial = 1.0;
    r.omega_final = 1.5;
    r.rise_time = 4.0;
    r.shape = RampShape::Tanh;
    r.head_hold = 3.0;
    r.tail_hold = 10.0;

    ScaleFactorOptions sopt;
    sopt.rtol = 1e-11;
    ScaleFactorSolution b = integrate_scale_factor(r, sopt);

    ChainDynamicsOptions copt;
    copt.rtol = 1e-11;
    ChainTrajectory traj = integrate_full_chain(chain.positions, {0.0, 0.0}, r, copt);
    CHECK(traj.energy_drift <= 1e-8);

    double worst = 0.0;
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        const double bt = b.value(traj.t[k]);
        for (int i = 0; i < 2; ++i)
            worst = std::max(worst,
                             std::abs(traj.q(static_cast<int>(k), i) -
                                      bt * chain.positions[i]));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("mode displacements oscillate at their own frequencies and stay separate") {
    ChainConfiguration chain = analyze_chain(3);
    TrapRamp r = static_trap(40.0);
    ScaleFactorSolution b = integrate_scale_factor(r);

    ChainDynamicsOptions copt;
    copt.rtol = 1e-10;
    copt.n_samples = 2049;

    // Center-of-mass kick: every ion shifted equally.
    std::vector<double> q_com = chain.positions;
    for (double& q : q_com) q += 0.01;
    ChainTrajectory com = integrate_full_chain(q_com, {0.0, 0.0, 0.0}, r, copt);
    linalg::Matrix proj = mode_projections(com, chain.positions, b, chain.mode_vectors);

    std::vector<double> c0(com.t.size()), c2(com.t.size());
    for (std::size_t k = 0; k < com.t.size(); ++k) {
        c0[k] = proj(static_cast<int>(k), 0);
        c2[k] = proj(static_cast<int>(k), 2);
    }
    // Only the rigid mode moves, at the bare trap frequency.
    CHECK(std::abs(c0.front() - 0.01 * std::sqrt(3.0)) <= 1e-10);
    CHECK(std::abs(c2.front()) <= 1e-10);
    const double amp_trap = spectral_amplitude(com.t, c0, 1.0);
    const double amp_zig = spectral_amplitude(com.t, c0, std::sqrt(5.8));
    CHECK(amp_trap > 10.0 * amp_zig);

    // Zigzag kick: displace along the third eigenvector.
    std::vector<double> q_zig = chain.positions;
    for (int i = 0; i < 3; ++i) q_zig[i] += 0.01 * chain.mode_vectors(i, 2);
    ChainTrajectory zig = integrate_full_chain(q_zig, {0.0, 0.0, 0.0}, r, copt);
    std::vector<double> z2 = mode_coordinate(zig, chain.positions, b,
                                             {chain.mode_vectors(0, 2),
                                              chain.mode_vectors(1, 2),
                                              chain.mode_vectors(2, 2)});
    const double amp_self = spectral_amplitude(zig.t, z2, std::sqrt(5.8));
    const double amp_cross = spectral_amplitude(zig.t, z2, 1.0);
    CHECK(amp_self > 10.0 * amp_cross);
}

TEST_CASE("closing ions trip the collision guard") {
    ChainConfiguration chain = analyze_chain(2);
    ChainDynamicsOptions opt;
    opt.collision_floor = 0.5;
    TrapRamp r = static_trap(20.0);
    try {
        integrate_full_chain(chain.positions, {2.5, -2.5}, r, opt);
        FAIL("expected the collision guard to fire");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IonCollision);
    }
}
