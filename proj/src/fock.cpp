#include "ioncosmo/fock.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "ioncosmo/errors.hpp"

namespace ioncosmo {

namespace {

constexpr int kAutoCap = 1024;
constexpr double kAutoTail = 1e-12;

int clamp_req(int n_max, int lo) {
    require(n_max <= 1 << 20, ErrorCode::InvalidArgument, "fock: n_max too large");
    return std::max(n_max, lo);
}

} // namespace

double FockDistribution::mean() const {
    double m = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) m += static_cast<double>(n) * p[n];
    return m;
}

FockDistribution thermal_distribution(double mean_n, int n_max) {
    require(mean_n >= 0.0 && std::isfinite(mean_n), ErrorCode::InvalidArgument,
            "thermal: mean_n must be >= 0");
    const double q = mean_n / (mean_n + 1.0); // P(n+1)/P(n)
    if (n_max <= 0) {
        n_max = 8;
        while (n_max < kAutoCap && std::pow(q, n_max + 1) > kAutoTail) n_max *= 2;
        n_max = std::min(n_max, kAutoCap);
    }
    n_max = clamp_req(n_max, 1);

    FockDistribution d;
    d.kind = StateKind::Thermal;
    d.p.resize(n_max + 1);
    double pn = 1.0 / (mean_n + 1.0);
    double sum = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        d.p[n] = pn;
        sum += pn;
        pn *= q;
    }
    d.tail_bound = std::max(0.0, 1.0 - sum);
    return d;
}

FockDistribution squeezed_vacuum_distribution(double xi_mag, int n_max) {
    require(xi_mag >= 0.0 && std::isfinite(xi_mag), ErrorCode::InvalidArgument,
            "squeezed vacuum: |xi| must be >= 0");
    const double t2 = std::tanh(xi_mag) * std::tanh(xi_mag);
    if (n_max <= 0) {
        n_max = 16;
        auto tail_small = [&](int cap) {
            // crude geometric bound: P(2m) <= P0 t2^m
            double mass = 0.0;
            double term = 1.0 / std::cosh(xi_mag);
            for (int m = 0; 2 * m <= cap; ++m) {
                mass += term;
                term *= t2 * (2.0 * m + 1.0) / (2.0 * m + 2.0);
            }
            return (1.0 - mass) < kAutoTail;
        };
        while (n_max < kAutoCap && !tail_small(n_max)) n_max *= 2;
        n_max = std::min(n_max, kAutoCap);
    }
    n_max = clamp_req(n_max, 2);

    FockDistribution d;
    d.kind = StateKind::SqueezedVacuum;
    d.p.assign(n_max + 1, 0.0);
    double p_even = 1.0 / std::cosh(xi_mag);
    double sum = 0.0;
    for (int m = 0; 2 * m <= n_max; ++m) {
        d.p[2 * m] = p_even;
        sum += p_even;
        p_even *= t2 * (2.0 * m + 1.0) / (2.0 * m + 2.0);
    }
    d.tail_bound = std::max(0.0, 1.0 - sum);
    return d;
}

linalg::Matrix squeeze_operator_matrix(double r, int dim) {
    require(dim >= 1 && dim <= 4096, ErrorCode::InvalidArgument,
            "squeeze operator: bad dimension");
    require(std::isfinite(r), ErrorCode::InvalidArgument, "squeeze operator: bad r");

    const int big = std::min(2 * dim, 4096);
    linalg::Matrix k(big, big);
    // a^2 has matrix element sqrt(n (n-1)) connecting column n to row n-2.
    for (int n = 2; n < big; ++n) {
        const double w = 0.5 * r * std::sqrt(static_cast<double>(n) * (n - 1.0));
        k(n - 2, n) = w;
        k(n, n - 2) = -w;
    }
    linalg::Matrix s_big = linalg::expm(k);
    linalg::Matrix s(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            s(i, j) = s_big(i, j);
    return s;
}

double squeezed_thermal_mean(double thermal_mean_n, double xi_mag) {
    return (thermal_mean_n + 0.5) * std::cosh(2.0 * xi_mag) - 0.5;
}

FockDistribution squeezed_thermal_distribution(double xi_mag, double thermal_mean_n,
                                               int n_max) {
    require(xi_mag >= 0.0 && std::isfinite(xi_mag), ErrorCode::InvalidArgument,
            "squeezed thermal: |xi| must be >= 0");
    require(thermal_mean_n >= 0.0 && std::isfinite(thermal_mean_n),
            ErrorCode::InvalidArgument, "squeezed thermal: mean_n must be >= 0");

    int cap = n_max;
    if (cap <= 0) {
        // Start from the combined spread of the two ingredients, then let the
        // tail check below escalate if needed.
        const double mean = squeezed_thermal_mean(thermal_mean_n, xi_mag);
        cap = 32;
        while (cap < kAutoCap && cap < 16.0 * (mean + 1.0)) cap *= 2;
    }
    cap = clamp_req(cap, 2);

    for (;;) {
        linalg::Matrix s = squeeze_operator_matrix(xi_mag, cap + 1);
        FockDistribution th = thermal_distribution(thermal_mean_n, cap);

        FockDistribution d;
        d.kind = StateKind::SqueezedThermal;
        d.p.assign(cap + 1, 0.0);
        for (int m = 0; m <= cap; ++m) {
            double acc = 0.0;
            for (int n = 0; n <= cap; ++n) {
                const double smn = s(m, n);
                acc += th.p[n] * smn * smn;
            }
            d.p[m] = acc;
        }
        double sum = 0.0;
        for (double v : d.p) sum += v;
        d.tail_bound = std::max(0.0, 1.0 - sum);

        if (n_max > 0 || d.tail_bound < 1e-9 || cap >= kAutoCap) {
            require(n_max > 0 || d.tail_bound < 1e-6, ErrorCode::TruncationTooSmall,
                    "squeezed thermal: truncation cap reached with tail mass " +
                        std::to_string(d.tail_bound));
            return d;
        }
        cap *= 2;
    }
}

ParityDiscriminator compare_p2_p1(const FockDistribution& dist) {
    ParityDiscriminator out;
    out.p1 = dist.probability(1);
    out.p2 = dist.probability(2);
    out.ratio = out.p2 / std::max(out.p1, 1e-300);
    out.squeezed_like = out.p2 > out.p1;
    return out;
}

double total_variation(const FockDistribution& lhs, const FockDistribution& rhs) {
    const std::size_t n = std::max(lhs.p.size(), rhs.p.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = i < lhs.p.size() ? lhs.p[i] : 0.0;
        const double b = i < rhs.p.size() ? rhs.p[i] : 0.0;
        s += std::abs(a - b);
    }
    s += std::abs(lhs.tail_bound - rhs.tail_bound);
    return 0.5 * s;
}

namespace {

using cplx = std::complex<double>;

// One mode of H(t) in the number basis of omega0:
// H = c1(t)/4 (2n+1) + c2(t)/4 (a^2 + a^dag^2),
// c1 = omega0 + omega^2/omega0, c2 = omega^2/omega0 - omega0.
struct LadderHamiltonian {
    double omega0 = 1.0;
    int dim = 0;
    std::vector<double> root2; // sqrt((n+1)(n+2)) for n = 0..dim-3

    explicit LadderHamiltonian(double om0, int dim_) : omega0(om0), dim(dim_) {
        root2.resize(std::max(0, dim - 2));
        for (int n = 0; n + 2 < dim; ++n)
            root2[n] = std::sqrt((n + 1.0) * (n + 2.0));
    }

    void apply(double omega_sq, const std::vector<cplx>& v, std::vector<cplx>& out) const {
        const double c1 = omega0 + omega_sq / omega0;
        const double c2 = omega_sq / omega0 - omega0;
        for (int n = 0; n < dim; ++n) {
            cplx acc = 0.25 * c1 * (2.0 * n + 1.0) * v[n];
            if (n + 2 < dim) acc += 0.25 * c2 * root2[n] * v[n + 2];
            if (n - 2 >= 0) acc += 0.25 * c2 * root2[n - 2] * v[n - 2];
            out[n] = acc;
        }
    }

    // Gershgorin bounds of the frozen Hamiltonian.
    void bounds(double omega_sq, double& lo, double& hi) const {
        const double c1 = omega0 + omega_sq / omega0;
        const double c2 = std::abs(omega_sq / omega0 - omega0);
        lo = std::numeric_limits<double>::infinity();
        hi = -lo;
        for (int n = 0; n < dim; ++n) {
            const double d = 0.25 * c1 * (2.0 * n + 1.0);
            double r = 0.0;
            if (n + 2 < dim) r += 0.25 * c2 * root2[n];
            if (n - 2 >= 0) r += 0.25 * c2 * root2[n - 2];
            lo = std::min(lo, d - r);
            hi = std::max(hi, d + r);
        }
    }
};

// Bessel functions J_0..J_m at x by Miller's downward recurrence.
std::vector<double> bessel_j_table(int m, double x) {
    std::vector<double> j(m + 1, 0.0);
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    const int start = std::max(m, static_cast<int>(std::ceil(x))) + 40;
    std::vector<double> work(start + 2, 0.0);
    work[start + 1] = 0.0;
    work[start] = 1e-280;
    for (int k = start; k >= 1; --k) {
        work[k - 1] = (2.0 * k / x) * work[k] - work[k + 1];
        if (std::abs(work[k - 1]) > 1e260) {
            for (int i = k - 1; i <= start + 1; ++i) work[i] *= 1e-260;
        }
    }
    double norm = work[0];
    for (int k = 2; k <= start; k += 2) norm += 2.0 * work[k];
    const double inv = 1.0 / norm;
    for (int k = 0; k <= m; ++k) j[k] = work[k] * inv;
    return j;
}

// Workspace for the Chebyshev propagator; reused across steps and columns.
struct ChebWork {
    std::vector<cplx> tprev, tcur, tnext, acc;
};

// psi <- exp(-i H dt) psi via a Chebyshev expansion of the frozen H:
// exp(-i H dt) = e^{-i b dt} [J_0(s) + 2 sum_k (-i)^k J_k(s) T_k(Htilde)],
// Htilde = (H - b)/a scaled to spectrum [-1, 1], s = a dt.
void chebyshev_step(const LadderHamiltonian& h, double omega_sq, double dt,
                    std::vector<cplx>& psi, ChebWork& w) {
    double lo, hi;
    h.bounds(omega_sq, lo, hi);
    const double a = 0.5 * (hi - lo) * 1.01 + 1e-12;
    const double b = 0.5 * (hi + lo);
    const double s = a * dt;

    const int m = static_cast<int>(std::ceil(s + 20.0 + 8.0 * std::cbrt(s + 1.0)));
    const auto bj = bessel_j_table(m, s);

    const int dim = h.dim;
    w.tprev = psi;                       // T_0 psi
    w.tnext.resize(dim);
    h.apply(omega_sq, w.tprev, w.tnext); // H psi
    w.tcur.resize(dim);
    for (int n = 0; n < dim; ++n) w.tcur[n] = (w.tnext[n] - b * w.tprev[n]) / a; // T_1 psi

    const cplx mi(0.0, -1.0); // (-i)^k walks the cycle 1, -i, -1, i
    cplx phase = mi;
    w.acc.resize(dim);
    for (int n = 0; n < dim; ++n)
        w.acc[n] = bj[0] * w.tprev[n] + 2.0 * bj[1] * phase * w.tcur[n];

    int tail_run = 0;
    for (int k = 2; k <= m; ++k) {
        h.apply(omega_sq, w.tcur, w.tnext);
        for (int n = 0; n < dim; ++n)
            w.tnext[n] = 2.0 * (w.tnext[n] - b * w.tcur[n]) / a - w.tprev[n];
        phase *= mi;
        const double c = 2.0 * bj[k];
        for (int n = 0; n < dim; ++n) w.acc[n] += c * phase * w.tnext[n];
        w.tprev.swap(w.tcur);
        w.tcur.swap(w.tnext);
        tail_run = std::abs(c) < 1e-17 ? tail_run + 1 : 0;
        if (tail_run >= 3 && k > static_cast<int>(s)) break;
    }

    const cplx global = std::exp(cplx(0.0, -b * dt));
    for (int n = 0; n < dim; ++n) psi[n] = global * w.acc[n];
}

struct OracleRun {
    FockDistribution dist;
    double unitarity_drift = 0.0;
};

OracleRun run_oracle_once(const FrequencyProfile& profile, const FockDistribution& initial,
                          int n_max, int total_steps, const linalg::Matrix& basis_change,
                          double weight_floor) {
    const int dim = n_max + 1;
    const double om0 = std::sqrt(profile.omega_sq(0.0));
    LadderHamiltonian h(om0, dim);

    // Active windows: [head_end, tail_start] split at interior breakpoints.
    const double t_lo = profile.head_end;
    const double t_hi = profile.tail_start;
    std::vector<double> cuts{t_lo};
    for (double b : profile.breakpoints)
        if (b > t_lo + 1e-15 && b < t_hi - 1e-15) cuts.push_back(b);
    cuts.push_back(t_hi);

    OracleRun out;
    out.dist.kind = StateKind::Numeric;
    out.dist.p.assign(dim, 0.0);

    std::vector<cplx> psi(dim), proj(dim);
    ChebWork work;
    for (int n0 = 0; n0 <= initial.n_max(); ++n0) {
        const double weight = initial.p[n0];
        if (weight <= weight_floor) continue;
        require(n0 < dim, ErrorCode::TruncationTooSmall,
                "fock oracle: initial state extends past the truncation");

        std::fill(psi.begin(), psi.end(), cplx(0.0, 0.0));
        psi[n0] = 1.0;

        if (t_hi > t_lo) {
            const double span = t_hi - t_lo;
            for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
                const double a = cuts[seg];
                const double b = cuts[seg + 1];
                if (b <= a) continue;
                const int steps =
                    std::max(2, static_cast<int>(std::lround(total_steps * (b - a) / span)));
                const double dt = (b - a) / steps;
                for (int k = 0; k < steps; ++k) {
                    const double tm = a + (k + 0.5) * dt;
                    chebyshev_step(h, profile.omega_sq(tm), dt, psi, work);
                }
            }
        }

        double norm2 = 0.0;
        for (const auto& c : psi) norm2 += std::norm(c);
        out.unitarity_drift = std::max(out.unitarity_drift, std::abs(norm2 - 1.0));

        // Re-express in the tail-frequency number basis: columns of
        // basis_change are the out-basis states written in the om0 basis.
        for (int m = 0; m < dim; ++m) {
            cplx acc = 0.0;
            for (int n = 0; n < dim; ++n) acc += basis_change(n, m) * psi[n];
            proj[m] = acc;
        }
        for (int m = 0; m < dim; ++m) out.dist.p[m] += weight * std::norm(proj[m]);
    }

    // Mass never assigned to a bin: skipped initial weight plus basis-change
    // truncation loss. Both end up outside p, so 1 - sum covers them.
    double sum = 0.0;
    for (double v : out.dist.p) sum += v;
    out.dist.tail_bound = std::clamp(1.0 - sum, 0.0, 1.0);
    return out;
}

} // namespace

FockOracleResult evolve_fock_oracle(const FrequencyProfile& profile,
                                    const FockDistribution& initial, int n_max,
                                    double tol, double flat_tol) {
    require(n_max >= 32, ErrorCode::InvalidArgument, "fock oracle: n_max must be >= 32");
    require(n_max <= 2048, ErrorCode::InvalidArgument, "fock oracle: n_max too large");
    require(tol > 0.0, ErrorCode::InvalidArgument, "fock oracle: tol must be positive");
    require(!initial.p.empty(), ErrorCode::InvalidArgument, "fock oracle: empty initial state");
    require(profile.t_end > 0.0, ErrorCode::InvalidArgument, "fock oracle: empty profile");

    double initial_mass = 0.0;
    for (double v : initial.p) initial_mass += v;
    require(std::abs(initial_mass + initial.tail_bound - 1.0) <= 1e-6,
            ErrorCode::NotNormalized, "fock oracle: initial populations must sum to 1");

    // The profile must be flat on head and tail for number bases to exist.
    auto omega_sq_raw = [&profile](double t) -> double {
        if (!profile.const_segments.empty()) {
            // Right-continuous at jumps, matching the step-ramp convention.
            for (const auto& s : profile.const_segments)
                if (t < s.t_stop) return s.omega * s.omega;
            const double w = profile.const_segments.back().omega;
            return w * w;
        }
        return profile.omega_sq(t);
    };
    auto omega_at = [&](double t) {
        const double w2 = omega_sq_raw(t);
        require(std::isfinite(w2) && w2 > 0.0, ErrorCode::NegativeFrequencySquared,
                "fock oracle: omega^2 must stay positive");
        return std::sqrt(w2);
    };
    const double om_in = omega_at(0.0);
    const double om_out = omega_at(profile.t_end);
    if (!profile.const_segments.empty()) {
        // Jumps may sit only between the head and the tail.
        const double slack = 1e-12 * profile.t_end;
        for (std::size_t s = 0; s + 1 < profile.const_segments.size(); ++s) {
            const double boundary = profile.const_segments[s].t_stop;
            require(boundary >= profile.head_end - slack &&
                        boundary <= profile.tail_start + slack,
                    ErrorCode::NonConstantBoundary,
                    "fock oracle: jump inside head or tail");
        }
    } else {
        for (int i = 0; i <= 16; ++i) {
            const double th = profile.head_end * i / 16.0;
            require(std::abs(omega_at(th) - om_in) <= flat_tol * om_in,
                    ErrorCode::NonConstantBoundary, "fock oracle: head not flat");
            const double tt = profile.tail_start +
                              (profile.t_end - profile.tail_start) * i / 16.0;
            require(std::abs(omega_at(tt) - om_out) <= flat_tol * om_out,
                    ErrorCode::NonConstantBoundary, "fock oracle: tail not flat");
        }
    }

    // Out-basis change: the out-frequency vacuum has x-variance 1/(2 om_out),
    // reached from the om_in vacuum by the squeeze with r = ln(om_out/om_in)/2.
    const double r_bc = 0.5 * std::log(om_out / om_in);
    const linalg::Matrix basis_change = squeeze_operator_matrix(r_bc, n_max + 1);

    FrequencyProfile numeric = profile;
    if (!profile.const_segments.empty()) {
        // Piecewise-constant profiles evolve trivially between jumps in each
        // segment's own eigenbasis, but the ladder here is fixed to om_in, so
        // just evaluate omega_sq from the segment table.
        numeric.omega_sq = [segs = profile.const_segments](double t) {
            for (const auto& s : segs)
                if (t < s.t_stop) return s.omega * s.omega;
            return segs.back().omega * segs.back().omega;
        };
    }

    const double weight_floor = std::min(1e-10, tol * 1e-4);

    FockOracleResult out;
    int steps = 64;
    OracleRun prev = run_oracle_once(numeric, initial, n_max, steps, basis_change,
                                     weight_floor);
    for (;;) {
        const int next_steps = steps * 2;
        OracleRun cur = run_oracle_once(numeric, initial, n_max, next_steps, basis_change,
                                        weight_floor);
        const double gap = total_variation(prev.dist, cur.dist);
        if (gap <= 0.5 * tol) {
            out.dist = std::move(cur.dist);
            out.unitarity_drift = cur.unitarity_drift;
            out.refinement_gap = gap;
            out.steps_used = next_steps;
            break;
        }
        require(next_steps < 1 << 15, ErrorCode::ToleranceNotMet,
                "fock oracle: step refinement did not converge to tol");
        prev = std::move(cur);
        steps = next_steps;
    }

    // Leakage into the top of the ladder means the truncation is biting.
    double top_mass = 0.0;
    for (int m = std::max(0, n_max - 7); m <= n_max; ++m) top_mass += out.dist.p[m];
    require(top_mass <= std::max(1e-8, tol), ErrorCode::TruncationTooSmall,
            "fock oracle: population reached the truncation edge");
    return out;
}

} // namespace ioncosmo
