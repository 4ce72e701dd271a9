#include "ioncosmo/modeqn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ioncosmo/errors.hpp"
#include "ioncosmo/ode.hpp"

namespace ioncosmo {

namespace {

using cplx = std::complex<double>;

double checked_omega_sq(const FrequencyProfile& p, double t) {
    const double w2 = p.omega_sq(t);
    require(std::isfinite(w2), ErrorCode::NegativeFrequencySquared,
            "mode profile: omega^2 is not finite at t=" + std::to_string(t));
    require(w2 > 0.0, ErrorCode::NegativeFrequencySquared,
            "mode profile: omega^2 <= 0 at t=" + std::to_string(t));
    return w2;
}

void check_flat(const FrequencyProfile& p, double t_lo, double t_hi, double omega_ref,
                double flat_tol, const char* which) {
    const int n_probe = 33;
    for (int i = 0; i <= n_probe; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / n_probe;
        const double w = std::sqrt(checked_omega_sq(p, t));
        if (std::abs(w - omega_ref) > flat_tol * omega_ref) {
            fail(ErrorCode::NonConstantBoundary,
                 std::string("mode profile: ") + which + " segment is not flat: omega(" +
                     std::to_string(t) + ")=" + std::to_string(w) + " vs " +
                     std::to_string(omega_ref));
        }
    }
}

struct Projection {
    cplx alpha, beta;
};

// Projects (chi, chi_dot) at time t onto exp(-i omega t) / exp(+i omega t)
// plane waves normalized as the out-vacuum.
Projection project(double t, cplx chi, cplx chi_dot, double omega) {
    const cplx i(0.0, 1.0);
    const double sq = std::sqrt(omega / 2.0);
    const double isq = 1.0 / std::sqrt(2.0 * omega);
    const cplx a = std::exp(i * omega * t) * (sq * chi + i * isq * chi_dot);
    const cplx b = std::exp(-i * omega * t) * (sq * chi - i * isq * chi_dot);
    return {a, b};
}

double wronskian(cplx chi, cplx chi_dot) {
    return 2.0 * std::imag(chi * std::conj(chi_dot));
}

// Exact evolution across one constant-frequency span.
void rotate(cplx& chi, cplx& chi_dot, double omega, double dt) {
    if (dt == 0.0) return;
    const double c = std::cos(omega * dt);
    const double s = std::sin(omega * dt);
    const cplx chi1 = chi * c + chi_dot * (s / omega);
    const cplx chi_dot1 = -chi * (omega * s) + chi_dot * c;
    chi = chi1;
    chi_dot = chi_dot1;
}

ModeEvolution integrate_piecewise_const(const FrequencyProfile& p,
                                        const ModeIntegrationOptions& opt) {
    const auto& segs = p.const_segments;
    for (const auto& s : segs) {
        require(std::isfinite(s.omega) && s.omega > 0.0, ErrorCode::NegativeFrequencySquared,
                "mode profile: piecewise-constant segment frequency must be positive");
        require(s.t_stop >= s.t_start, ErrorCode::InvalidArgument,
                "mode profile: segment runs backwards");
    }

    ModeEvolution ev;
    ev.omega_in = segs.front().omega;
    ev.omega_out = segs.back().omega;

    const double om0 = ev.omega_in;
    cplx chi(1.0 / std::sqrt(2.0 * om0), 0.0);
    cplx chi_dot(0.0, -om0 / std::sqrt(2.0 * om0));

    ev.samples.reserve(opt.n_samples);
    std::size_t seg_idx = 0;
    double seg_t = segs.front().t_start; // current time within segment walk
    cplx c = chi, cd = chi_dot;

    for (int k = 0; k < opt.n_samples; ++k) {
        const double t = p.t_end * k / (opt.n_samples - 1);
        // advance through segments to time t
        while (seg_idx < segs.size() && segs[seg_idx].t_stop < t) {
            rotate(c, cd, segs[seg_idx].omega, segs[seg_idx].t_stop - seg_t);
            seg_t = segs[seg_idx].t_stop;
            ++seg_idx;
        }
        const double om = segs[std::min(seg_idx, segs.size() - 1)].omega;
        cplx cs = c, cds = cd;
        rotate(cs, cds, om, t - seg_t);
        ev.samples.push_back({t, om, cs, cds, wronskian(cs, cds)});
    }

    // final state at t_end
    while (seg_idx < segs.size()) {
        rotate(c, cd, segs[seg_idx].omega, segs[seg_idx].t_stop - seg_t);
        seg_t = segs[seg_idx].t_stop;
        ++seg_idx;
    }

    auto pr = project(p.t_end, c, cd, ev.omega_out);
    ev.alpha = pr.alpha;
    ev.beta = pr.beta;

    double drift = 0.0;
    for (const auto& s : ev.samples) drift = std::max(drift, std::abs(s.wronskian - 1.0));
    ev.wronskian_drift = drift;
    ev.error_estimate = 1e-12 * (1.0 + std::norm(pr.beta));
    return ev;
}

void finalize(ModeEvolution& ev, double norm_tol) {
    const double norm = std::norm(ev.alpha) - std::norm(ev.beta);
    require(std::abs(norm - 1.0) <= norm_tol * (1.0 + 2.0 * std::norm(ev.beta)),
            ErrorCode::NotNormalized,
            "mode evolution: |alpha|^2 - |beta|^2 deviates from 1 by " +
                std::to_string(norm - 1.0));

    // Rephase the out mode so alpha is real and positive; populations are
    // unchanged and xi gets a definite phase.
    const cplx phase = std::exp(cplx(0.0, -std::arg(ev.alpha)));
    ev.alpha = cplx(std::abs(ev.alpha), 0.0);
    ev.beta *= phase;

    const double babs = std::abs(ev.beta);
    ev.n_created = babs * babs;
    if (babs > 0.0) {
        // With alpha real, a_out = cosh|xi| a - e^{i theta} sinh|xi| a^dag
        // requires e^{i theta} = -beta / |beta|.
        ev.xi = std::asinh(babs) * (-ev.beta / babs);
    } else {
        ev.xi = 0.0;
    }
}

} // namespace

ModeEvolution integrate_mode(const FrequencyProfile& profile,
                             const ModeIntegrationOptions& opt) {
    require(profile.t_end > 0.0, ErrorCode::InvalidArgument, "mode profile: t_end must be > 0");
    require(opt.n_samples >= 2, ErrorCode::InvalidArgument,
            "mode integration: need at least 2 samples");
    require(profile.head_end >= 0.0 && profile.head_end <= profile.t_end &&
                profile.tail_start >= 0.0 && profile.tail_start <= profile.t_end,
            ErrorCode::InvalidArgument, "mode profile: head/tail outside domain");

    if (!profile.const_segments.empty()) {
        ModeEvolution ev = integrate_piecewise_const(profile, opt);
        finalize(ev, 1e-9);
        return ev;
    }

    require(static_cast<bool>(profile.omega_sq), ErrorCode::InvalidArgument,
            "mode profile: omega_sq not set");

    const double om_in = std::sqrt(checked_omega_sq(profile, 0.0));
    const double om_out = std::sqrt(checked_omega_sq(profile, profile.t_end));
    check_flat(profile, 0.0, profile.head_end, om_in, opt.flat_tol, "head");
    check_flat(profile, profile.tail_start, profile.t_end, om_out, opt.flat_tol, "tail");

    ModeEvolution ev;
    ev.omega_in = om_in;
    ev.omega_out = om_out;

    ode::Rhs rhs = [&profile](double t, const ode::State& y, ode::State& dy) {
        const double w2 = checked_omega_sq(profile, t);
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = -w2 * y[0];
        dy[3] = -w2 * y[1];
    };

    ode::State y0 = {1.0 / std::sqrt(2.0 * om_in), 0.0, 0.0, -om_in / std::sqrt(2.0 * om_in)};

    std::vector<double> sample_times(opt.n_samples);
    for (int k = 0; k < opt.n_samples; ++k)
        sample_times[k] = profile.t_end * k / (opt.n_samples - 1);

    ev.samples.reserve(opt.n_samples);
    auto sink = [&](double t, const ode::State& y) {
        ModeSample s;
        s.t = t;
        s.omega = std::sqrt(checked_omega_sq(profile, t));
        s.chi = cplx(y[0], y[1]);
        s.chi_dot = cplx(y[2], y[3]);
        s.wronskian = wronskian(s.chi, s.chi_dot);
        ev.samples.push_back(s);
    };

    ode::Options oopt;
    oopt.rtol = opt.rtol;
    oopt.atol = opt.rtol * 1e-2;
    ode::State yf = ode::integrate_segmented(rhs, std::move(y0), 0.0, profile.t_end,
                                             profile.breakpoints, oopt, sample_times, sink);

    const cplx chi_f(yf[0], yf[1]);
    const cplx chi_dot_f(yf[2], yf[3]);
    auto pr = project(profile.t_end, chi_f, chi_dot_f, om_out);
    ev.alpha = pr.alpha;
    ev.beta = pr.beta;

    double drift = std::abs(wronskian(chi_f, chi_dot_f) - 1.0);
    for (const auto& s : ev.samples) drift = std::max(drift, std::abs(s.wronskian - 1.0));
    ev.wronskian_drift = drift;

    // Independent error gauge: |beta| must be time-independent on the flat
    // tail, so its spread across tail samples measures the integration error.
    const double n_final = std::norm(pr.beta);
    double tail_spread = 0.0;
    for (const auto& s : ev.samples) {
        if (s.t < profile.tail_start) continue;
        auto pt = project(s.t, s.chi, s.chi_dot, om_out);
        tail_spread = std::max(tail_spread, std::abs(std::norm(pt.beta) - n_final));
    }
    const double eps_floor = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + n_final);
    ev.error_estimate =
        10.0 * std::max({tail_spread, drift * (n_final + 0.5), eps_floor});

    finalize(ev, std::max(1e-6, 1e4 * opt.rtol));
    return ev;
}

SuddenLimit sudden_limit(double omega_i, double omega_f) {
    require(omega_i > 0.0 && omega_f > 0.0, ErrorCode::InvalidArgument,
            "sudden limit: frequencies must be positive");
    const double diff = omega_f - omega_i;
    const double n = diff * diff / (4.0 * omega_i * omega_f);
    return {n, std::asinh(std::sqrt(n))};
}

std::pair<std::complex<double>, std::complex<double>>
compose_bogoliubov(std::complex<double> alpha2, std::complex<double> beta2,
                   std::complex<double> alpha1, std::complex<double> beta1) {
    return {alpha2 * alpha1 + beta2 * std::conj(beta1),
            alpha2 * beta1 + beta2 * std::conj(alpha1)};
}

FrequencyProfile trap_mode_profile(const TrapRamp& ramp, double omega_kappa_sq,
                                   std::function<double(double)> b_of_t) {
    ramp.validate();
    require(omega_kappa_sq >= 0.0, ErrorCode::InvalidArgument,
            "trap mode profile: omega_kappa_sq must be >= 0");

    FrequencyProfile p;
    p.t_end = ramp.total_time();
    // With a prep leg the first flat stretch ends where the prep transition
    // begins; the in-state lives there.
    p.head_end = ramp.has_prep() ? ramp.prep_start() : ramp.ramp_start();
    p.tail_start = ramp.ramp_end();
    p.breakpoints = ramp.breakpoints();

    if (omega_kappa_sq == 0.0) {
        if (ramp.shape == RampShape::Step) {
            p.const_segments.clear();
            if (ramp.has_prep())
                p.const_segments.push_back({0.0, ramp.prep_start(), ramp.prep_omega});
            p.const_segments.push_back(
                {ramp.prep_end(), ramp.ramp_start(), ramp.omega_initial});
            p.const_segments.push_back({ramp.ramp_start(), p.t_end, ramp.omega_final});
            return p;
        }
        p.omega_sq = [ramp](double t) { return ramp.omega_sq(t); };
        return p;
    }

    require(static_cast<bool>(b_of_t), ErrorCode::InvalidArgument,
            "trap mode profile: modes with omega_kappa_sq > 0 need the scale factor");
    // The Hessian eigenvalue is in units of the equilibrium trap frequency
    // squared, which is the frequency at t = 0.
    const double om0_sq = ramp.omega_sq(0.0);
    p.omega_sq = [ramp, omega_kappa_sq, om0_sq, b = std::move(b_of_t)](double t) {
        const double bt = b(t);
        require(std::isfinite(bt) && bt > 0.0, ErrorCode::Collapse,
                "trap mode profile: scale factor must stay positive");
        return ramp.omega_sq(t) + om0_sq * omega_kappa_sq / (bt * bt * bt);
    };
    return p;
}

} // namespace ioncosmo
