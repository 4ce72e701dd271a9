#include "ioncosmo/readout.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "ioncosmo/errors.hpp"

namespace ioncosmo {

namespace {

constexpr double kPi = 3.14159265358979323846;

int sideband_order(PulseKind kind) {
    switch (kind) {
        case PulseKind::Carrier: return 0;
        case PulseKind::Rsb1: return 1;
        case PulseKind::Rsb2: return 2;
    }
    return 0;
}

} // namespace

const char* pulse_kind_name(PulseKind kind) {
    switch (kind) {
        case PulseKind::Carrier: return "carrier";
        case PulseKind::Rsb1: return "rsb1";
        case PulseKind::Rsb2: return "rsb2";
    }
    return "?";
}

double rabi_coupling(int n, int m, double eta) {
    require(n >= 0 && m >= 0, ErrorCode::InvalidArgument,
            "rabi coupling: levels must be >= 0");
    require(eta >= 0.0 && eta < 1.0, ErrorCode::InvalidArgument,
            "rabi coupling: eta must be in [0, 1)");
    if (n < m) return 0.0;

    const int k = n - m; // lower level of the pair
    const double x = eta * eta;

    // L_k^{(m)}(x) by the three-term recurrence, stable for x >= 0.
    double lag = 1.0;
    if (k >= 1) {
        double prev = 1.0;
        double cur = 1.0 + m - x;
        for (int j = 2; j <= k; ++j) {
            const double next = ((2.0 * j - 1.0 + m - x) * cur - (j - 1.0 + m) * prev) / j;
            prev = cur;
            cur = next;
        }
        lag = cur;
    }

    // sqrt(k!/n!) = 1/sqrt((k+1)(k+2)...n)
    double fac = 1.0;
    for (int j = k + 1; j <= n; ++j) fac *= j;
    return std::exp(-0.5 * x) * std::pow(eta, m) * std::abs(lag) / std::sqrt(fac);
}

std::vector<PulseSpec> standard_sequence(char first_pulse, double eta) {
    require(first_pulse == 'a' || first_pulse == 'b', ErrorCode::InvalidArgument,
            "sequence: first pulse must be 'a' or 'b'");
    require(eta > 0.0, ErrorCode::InvalidArgument,
            "sequence: eta must be positive (pi times diverge at eta = 0)");
    // pi on the designated pair: 2 pi * duration * coupling = pi.
    std::vector<PulseSpec> seq;
    if (first_pulse == 'a') {
        seq.push_back({PulseKind::Rsb2, 0.5 / rabi_coupling(2, 2, eta), eta});
    } else {
        seq.push_back({PulseKind::Rsb1, 0.5 / rabi_coupling(1, 1, eta), eta});
    }
    seq.push_back({PulseKind::Carrier, 0.5 / rabi_coupling(0, 0, eta), eta});
    return seq;
}

namespace {

using cplx = std::complex<double>;

// Density matrix over |spin, n>: index = spin * dim + n, spin 0 = down.
struct SpinFock {
    int dim;
    std::vector<cplx> rho; // (2 dim)^2 row-major

    explicit SpinFock(const FockDistribution& d) : dim(d.n_max() + 1) {
        rho.assign(4 * static_cast<std::size_t>(dim) * dim, cplx(0.0, 0.0));
        for (int n = 0; n < dim; ++n) at(n, n) = d.p[n];
    }

    cplx& at(int i, int j) { return rho[static_cast<std::size_t>(i) * 2 * dim + j]; }

    // rho <- U rho U^dag for U acting as [[cos, -i sin], [-i sin, cos]] on the
    // disjoint index pairs. Half-angle cosines and sines come precomputed so
    // an ideal pi pulse swaps pairs exactly instead of through trig roundoff.
    void rotate_pairs(const std::vector<std::pair<int, int>>& pairs,
                      const std::vector<double>& half_cos,
                      const std::vector<double>& half_sin) {
        const int full = 2 * dim;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const auto [i, j] = pairs[p];
            const double c = half_cos[p];
            const cplx s(0.0, -half_sin[p]);
            for (int col = 0; col < full; ++col) {
                const cplx ri = at(i, col);
                const cplx rj = at(j, col);
                at(i, col) = c * ri + s * rj;
                at(j, col) = s * ri + c * rj;
            }
        }
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const auto [i, j] = pairs[p];
            const double c = half_cos[p];
            const cplx sc(0.0, half_sin[p]); // conj(-i sin)
            for (int row = 0; row < full; ++row) {
                const cplx ri = at(row, i);
                const cplx rj = at(row, j);
                at(row, i) = c * ri + sc * rj;
                at(row, j) = sc * ri + c * rj;
            }
        }
    }
};

} // namespace

namespace {

struct PulsePlan {
    std::vector<std::pair<int, int>> pairs;
    std::vector<double> half_cos;
    std::vector<double> half_sin;
};

PulsePlan plan_pulse(const PulseSpec& pulse, PulseMode mode, int dim) {
    const int m = sideband_order(pulse.kind);
    require(m < dim, ErrorCode::InvalidArgument, "readout: sideband order exceeds basis");

    PulsePlan plan;
    if (mode == PulseMode::IdealPi) {
        // Exact swaps: half-angle cos 0, sin 1.
        if (pulse.kind == PulseKind::Carrier) {
            for (int n = 0; n < dim; ++n) {
                plan.pairs.emplace_back(n, dim + n);
                plan.half_cos.push_back(0.0);
                plan.half_sin.push_back(1.0);
            }
        } else {
            // Only the designated pair moves: |down, m> <-> |up, 0>.
            plan.pairs.emplace_back(m, dim + 0);
            plan.half_cos.push_back(0.0);
            plan.half_sin.push_back(1.0);
        }
    } else {
        require(pulse.duration >= 0.0 && std::isfinite(pulse.duration),
                ErrorCode::InvalidArgument, "readout: bad pulse duration");
        for (int n = m; n < dim; ++n) {
            plan.pairs.emplace_back(n, dim + (n - m));
            const double half =
                kPi * pulse.duration * rabi_coupling(n, m, pulse.eta);
            plan.half_cos.push_back(std::cos(half));
            plan.half_sin.push_back(std::sin(half));
        }
    }
    return plan;
}

// Same rotations applied to a pure state vector (used for the per-level
// transfer profile; for pure inputs this matches the density-matrix path).
void rotate_vector(std::vector<cplx>& psi, const PulsePlan& plan) {
    for (std::size_t p = 0; p < plan.pairs.size(); ++p) {
        const auto [i, j] = plan.pairs[p];
        const double c = plan.half_cos[p];
        const cplx s(0.0, -plan.half_sin[p]);
        const cplx pi = psi[i];
        const cplx pj = psi[j];
        psi[i] = c * pi + s * pj;
        psi[j] = s * pi + c * pj;
    }
}

} // namespace

ReadoutOutcome apply_sequence(const FockDistribution& dist,
                              const std::vector<PulseSpec>& pulses, PulseMode mode) {
    require(!dist.p.empty(), ErrorCode::InvalidArgument, "readout: empty distribution");
    double mass = 0.0;
    for (double v : dist.p) mass += v;
    require(std::abs(mass + dist.tail_bound - 1.0) <= 1e-6, ErrorCode::NotNormalized,
            "readout: populations must sum to 1");

    SpinFock sf(dist);
    const int dim = sf.dim;

    std::vector<PulsePlan> plans;
    plans.reserve(pulses.size());
    for (const auto& pulse : pulses) plans.push_back(plan_pulse(pulse, mode, dim));

    for (const auto& plan : plans)
        sf.rotate_pairs(plan.pairs, plan.half_cos, plan.half_sin);

    ReadoutOutcome out;
    out.down_populations.resize(dim);
    out.up_populations.resize(dim);
    double bright = 0.0;
    for (int n = 0; n < dim; ++n) {
        out.down_populations[n] = std::real(sf.at(n, n));
        out.up_populations[n] = std::real(sf.at(dim + n, dim + n));
        bright += out.down_populations[n];
    }
    out.bright_probability = std::clamp(bright, 0.0, 1.0);

    out.per_n_transfer.resize(dim);
    std::vector<cplx> psi(2 * static_cast<std::size_t>(dim));
    for (int n0 = 0; n0 < dim; ++n0) {
        std::fill(psi.begin(), psi.end(), cplx(0.0, 0.0));
        psi[n0] = cplx(1.0, 0.0);
        for (const auto& plan : plans) rotate_vector(psi, plan);
        double t = 0.0;
        for (int k = 0; k < dim; ++k) t += std::norm(psi[k]);
        out.per_n_transfer[n0] = t;
    }
    return out;
}

std::uint64_t sample_detection(double bright_probability, std::uint64_t trials,
                               std::uint64_t seed, double detection_efficiency) {
    require(bright_probability >= 0.0 && bright_probability <= 1.0,
            ErrorCode::InvalidArgument, "detection: probability out of range");
    require(detection_efficiency > 0.0 && detection_efficiency <= 1.0,
            ErrorCode::InvalidArgument, "detection: efficiency must be in (0, 1]");
    const double p = bright_probability * detection_efficiency;
    std::mt19937_64 rng(seed);
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < p) ++count;
    }
    return count;
}

} // namespace ioncosmo
