#include "ioncosmo/cosmo.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "ioncosmo/errors.hpp"

namespace ioncosmo {

std::vector<double> ricci_from_scale_factor(const std::vector<double>& t,
                                            const std::vector<double>& a) {
    const std::size_t n = t.size();
    require(n >= 5 && a.size() == n, ErrorCode::InvalidArgument,
            "ricci: need at least 5 matching samples");
    const double dt = t[1] - t[0];
    require(dt > 0.0, ErrorCode::InvalidArgument, "ricci: grid must ascend");
    for (std::size_t i = 0; i + 1 < n; ++i) {
        require(std::abs((t[i + 1] - t[i]) - dt) <= 1e-9 * (1.0 + std::abs(t[i])),
                ErrorCode::InvalidArgument, "ricci: grid must be uniform");
        require(a[i] > 0.0, ErrorCode::InvalidArgument, "ricci: scale factor must be positive");
    }
    require(a[n - 1] > 0.0, ErrorCode::InvalidArgument,
            "ricci: scale factor must be positive");

    std::vector<double> r(n);
    auto ricci = [](double av, double ad, double add) {
        return 6.0 / std::pow(av, 7) * (add - 2.0 * ad * ad / av);
    };

    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double ad = (a[i + 1] - a[i - 1]) / (2.0 * dt);
        const double add = (a[i + 1] - 2.0 * a[i] + a[i - 1]) / (dt * dt);
        r[i] = ricci(a[i], ad, add);
    }
    // Second-order one-sided stencils at the ends.
    {
        const double ad = (-3.0 * a[0] + 4.0 * a[1] - a[2]) / (2.0 * dt);
        const double add = (2.0 * a[0] - 5.0 * a[1] + 4.0 * a[2] - a[3]) / (dt * dt);
        r[0] = ricci(a[0], ad, add);
    }
    {
        const double ad = (3.0 * a[n - 1] - 4.0 * a[n - 2] + a[n - 3]) / (2.0 * dt);
        const double add =
            (2.0 * a[n - 1] - 5.0 * a[n - 2] + 4.0 * a[n - 3] - a[n - 4]) / (dt * dt);
        r[n - 1] = ricci(a[n - 1], ad, add);
    }
    return r;
}

void CosmologyScenario::validate() const {
    a_profile.validate();
    require(!a_profile.has_prep(), ErrorCode::InvalidArgument,
            "cosmology: scale-factor profiles take a single transition (no prep leg)");
    require(std::isfinite(zeta), ErrorCode::InvalidArgument, "cosmology: zeta must be finite");
    require(ricci_samples >= 65, ErrorCode::InvalidArgument,
            "cosmology: ricci_samples must be >= 65");
    if (zeta != 0.0) {
        require(a_profile.shape != RampShape::Step, ErrorCode::InvalidArgument,
                "cosmology: zeta != 0 needs a differentiable scale factor (not step)");
    }
}

FrequencyProfile cosmology_mode_profile(const CosmologyScenario& scenario, double k) {
    scenario.validate();
    require(k > 0.0 && std::isfinite(k), ErrorCode::InvalidArgument,
            "cosmology: k must be positive");
    const TrapRamp& ap = scenario.a_profile;

    FrequencyProfile p;
    p.t_end = ap.total_time();
    p.head_end = ap.ramp_start();
    p.tail_start = ap.ramp_end();
    p.breakpoints = ap.breakpoints();

    if (ap.shape == RampShape::Step) {
        // zeta == 0 here (validate rejects the rest): piecewise constant.
        const double wi = ap.omega_initial * ap.omega_initial * k;
        const double wf = ap.omega_final * ap.omega_final * k;
        p.const_segments = {{0.0, ap.ramp_start(), wi}, {ap.ramp_start(), p.t_end, wf}};
        return p;
    }

    if (scenario.zeta == 0.0) {
        p.omega_sq = [ap, k](double t) {
            const double a = ap.omega(t);
            const double a2 = a * a;
            return a2 * a2 * k * k;
        };
        return p;
    }

    // Ricci term: finite differences of the sampled scale factor, linearly
    // interpolated. Outside the ramp window a is constant and R vanishes
    // identically, keeping head and tail exactly flat.
    const int n = scenario.ricci_samples;
    auto grid = std::make_shared<std::vector<double>>(n);
    auto rv = std::make_shared<std::vector<double>>();
    {
        std::vector<double> av(n);
        const double lo = ap.ramp_start();
        const double hi = ap.ramp_end();
        for (int i = 0; i < n; ++i) {
            (*grid)[i] = lo + (hi - lo) * i / (n - 1);
            av[i] = ap.omega((*grid)[i]);
        }
        *rv = ricci_from_scale_factor(*grid, av);
    }

    p.omega_sq = [ap, k, zeta = scenario.zeta, grid, rv](double t) {
        const double a = ap.omega(t);
        const double a2 = a * a;
        double ricci = 0.0;
        if (t > grid->front() && t < grid->back()) {
            const auto it = std::upper_bound(grid->begin(), grid->end(), t);
            const std::size_t i = static_cast<std::size_t>(it - grid->begin()) - 1;
            const std::size_t j = std::min(i, grid->size() - 2);
            const double s = (t - (*grid)[j]) / ((*grid)[j + 1] - (*grid)[j]);
            ricci = (1.0 - s) * (*rv)[j] + s * (*rv)[j + 1];
        }
        return a2 * a2 * k * k + zeta * a2 * a2 * a2 * ricci;
    };
    return p;
}

std::vector<SpectrumEntry> cosmological_spectrum(const CosmologyScenario& scenario,
                                                 const std::vector<double>& k_grid,
                                                 const ModeIntegrationOptions& opt) {
    scenario.validate();
    require(!k_grid.empty(), ErrorCode::InvalidArgument, "cosmology: empty k grid");
    std::vector<SpectrumEntry> out;
    out.reserve(k_grid.size());
    for (double k : k_grid) {
        FrequencyProfile p = cosmology_mode_profile(scenario, k);
        ModeEvolution ev = integrate_mode(p, opt);
        SpectrumEntry e;
        e.k = k;
        e.omega_in = ev.omega_in;
        e.omega_out = ev.omega_out;
        e.n_created = ev.n_created;
        e.xi_mag = std::abs(ev.xi);
        e.sudden_n = cosmological_sudden_limit(k, scenario.a_profile.omega_initial,
                                               scenario.a_profile.omega_final)
                         .n_created;
        out.push_back(e);
    }
    return out;
}

SuddenLimit cosmological_sudden_limit(double k, double a_initial, double a_final) {
    require(k > 0.0, ErrorCode::InvalidArgument, "cosmology: k must be positive");
    return sudden_limit(a_initial * a_initial * k, a_final * a_final * k);
}

AnalogyMap analogy_map(const TrapRamp& ramp, double omega_kappa_sq,
                       const ScaleFactorSolution& scale, int n_grid) {
    ramp.validate();
    require(omega_kappa_sq >= 0.0, ErrorCode::InvalidArgument,
            "analogy: omega_kappa_sq must be >= 0");
    require(n_grid >= 2, ErrorCode::InvalidArgument, "analogy: grid too small");

    AnalogyMap map;
    // Dimensionful wavenumber analog: the Hessian eigenvalue is in units of
    // the equilibrium (t = 0) trap frequency squared.
    const double om0_sq = ramp.omega_sq(0.0);
    map.k_sq_equivalent = om0_sq * omega_kappa_sq;
    map.t.resize(n_grid);
    map.mode_coefficient.resize(n_grid);
    map.mode_independent.resize(n_grid);

    const double t_end = ramp.total_time();
    double worst = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        const double t = t_end * i / (n_grid - 1);
        const double b = scale(t);
        require(b > 0.0, ErrorCode::Collapse, "analogy: scale factor must stay positive");
        map.t[i] = t;
        map.mode_coefficient[i] = 1.0 / (b * b * b);
        map.mode_independent[i] = ramp.omega_sq(t);
        const double reconstructed =
            map.mode_coefficient[i] * map.k_sq_equivalent + map.mode_independent[i];
        const double direct = ramp.omega_sq(t) + om0_sq * omega_kappa_sq / (b * b * b);
        worst = std::max(worst, std::abs(reconstructed - direct));
    }
    map.max_roundtrip_error = worst;

    map.dictionary = {
        "k^2                <-> omega_ax^2(0) omega_kappa^2 (Coulomb mode eigenvalue)",
        "a^4(t)             <-> 1/b^3(t) (mode-dependent coefficient; note the exponents:"
        " the pairing is between coefficient functions, not between powers of one"
        " common variable)",
        "zeta a^6(t) R(t)   <-> omega_ax^2(t) (mode-independent term)",
        "omega_mode^2(t) = a^4 k^2 + zeta a^6 R = omega_ax^2 + omega_kappa^2 / b^3",
    };
    return map;
}

} // namespace ioncosmo
