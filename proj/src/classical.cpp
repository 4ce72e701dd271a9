#include "ioncosmo/classical.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "ioncosmo/errors.hpp"
#include "ioncosmo/ode.hpp"

namespace ioncosmo {

ScaleFactorSolution::ScaleFactorSolution(std::vector<double> t, std::vector<double> b,
                                         std::vector<double> b_dot, double energy_drift)
    : t_(std::move(t)), b_(std::move(b)), b_dot_(std::move(b_dot)),
      energy_drift_(energy_drift) {
    require(t_.size() >= 2 && t_.size() == b_.size() && t_.size() == b_dot_.size(),
            ErrorCode::DimensionMismatch, "scale factor: sample arrays disagree");
}

namespace {

// Cubic Hermite basis on [0,1].
inline double h00(double s) { return (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s); }
inline double h10(double s) { return s * (1.0 - s) * (1.0 - s); }
inline double h01(double s) { return s * s * (3.0 - 2.0 * s); }
inline double h11(double s) { return s * s * (s - 1.0); }

inline double dh00(double s) { return 6.0 * s * (s - 1.0); }
inline double dh10(double s) { return (1.0 - s) * (1.0 - 3.0 * s); }
inline double dh01(double s) { return 6.0 * s * (1.0 - s); }
inline double dh11(double s) { return s * (3.0 * s - 2.0); }

std::size_t locate(const std::vector<double>& t, double x) {
    if (x <= t.front()) return 0;
    if (x >= t[t.size() - 2]) return t.size() - 2;
    auto it = std::upper_bound(t.begin(), t.end(), x);
    return static_cast<std::size_t>(it - t.begin()) - 1;
}

} // namespace

double ScaleFactorSolution::value(double t) const {
    if (t <= t_.front()) return b_.front();
    if (t >= t_.back()) return b_.back();
    const std::size_t k = locate(t_, t);
    const double h = t_[k + 1] - t_[k];
    const double s = (t - t_[k]) / h;
    return h00(s) * b_[k] + h10(s) * h * b_dot_[k] + h01(s) * b_[k + 1] +
           h11(s) * h * b_dot_[k + 1];
}

double ScaleFactorSolution::deriv(double t) const {
    if (t <= t_.front()) return b_dot_.front();
    if (t >= t_.back()) return b_dot_.back();
    const std::size_t k = locate(t_, t);
    const double h = t_[k + 1] - t_[k];
    const double s = (t - t_[k]) / h;
    return (dh00(s) * b_[k] + dh01(s) * b_[k + 1]) / h + dh10(s) * b_dot_[k] +
           dh11(s) * b_dot_[k + 1];
}

double ScaleFactorSolution::settled_value(double omega_initial, double omega_final) {
    require(omega_initial > 0.0 && omega_final > 0.0, ErrorCode::InvalidArgument,
            "scale factor: frequencies must be positive");
    return std::cbrt((omega_initial * omega_initial) / (omega_final * omega_final));
}

ScaleFactorSolution integrate_scale_factor(const TrapRamp& ramp,
                                           const ScaleFactorOptions& opt) {
    ramp.validate();
    const double t_end = ramp.total_time();
    require(t_end > 0.0, ErrorCode::InvalidArgument, "scale factor: zero-length schedule");

    const double om0_sq = ramp.omega_sq(0.0);
    const double om_max = std::max(ramp.omega_initial, ramp.omega_final);

    int n = opt.n_samples;
    if (n <= 0) {
        // Enough knots that cubic Hermite interpolation of an oscillation at
        // the fastest trap frequency stays near the integrator's accuracy.
        n = static_cast<int>(std::ceil(40.0 * t_end * std::max(om_max, 1.0))) + 2;
        n = std::clamp(n, 64, 4'000'000);
    }
    require(n >= 2, ErrorCode::InvalidArgument, "scale factor: need at least 2 samples");

    ode::Rhs rhs = [&ramp, om0_sq, floor = opt.collapse_floor](double t, const ode::State& y,
                                                               ode::State& dy) {
        const double b = y[0];
        require(std::isfinite(b) && b > floor, ErrorCode::Collapse,
                "scale factor: chain collapsed (b <= floor) at t=" + std::to_string(t));
        dy[0] = y[1];
        dy[1] = -ramp.omega_sq(t) * b + om0_sq / (b * b);
    };

    std::vector<double> ts(n), bs, bds;
    bs.reserve(n);
    bds.reserve(n);
    for (int k = 0; k < n; ++k) ts[k] = t_end * k / (n - 1);

    ode::Options oopt;
    oopt.rtol = opt.rtol;
    oopt.atol = opt.rtol * 1e-2;

    auto sink = [&](double, const ode::State& y) {
        bs.push_back(y[0]);
        bds.push_back(y[1]);
    };

    ode::State y0 = {1.0, 0.0};
    ode::integrate_segmented(rhs, std::move(y0), 0.0, t_end, ramp.breakpoints(), oopt, ts,
                             sink);
    require(static_cast<int>(bs.size()) == n, ErrorCode::Internal,
            "scale factor: sample count mismatch");

    // Energy is conserved wherever omega is constant; measure drift relative
    // to the segment-start value on head and tail.
    auto energy = [&](std::size_t k, double om_sq) {
        const double b = bs[k];
        return 0.5 * bds[k] * bds[k] + 0.5 * om_sq * b * b + om0_sq / b;
    };
    double drift = 0.0;
    const double flat_head_end = ramp.has_prep() ? ramp.prep_start() : ramp.ramp_start();
    const double om_h_sq = om0_sq;
    const double om_f_sq = ramp.omega_final * ramp.omega_final;
    double e_head = -1.0, e_tail = -1.0;
    for (int k = 0; k < n; ++k) {
        if (ts[k] <= flat_head_end) {
            const double e = energy(k, om_h_sq);
            if (e_head < 0.0) e_head = e;
            drift = std::max(drift, std::abs(e - e_head) / std::abs(e_head));
        } else if (ts[k] >= ramp.ramp_end()) {
            const double e = energy(k, om_f_sq);
            if (e_tail < 0.0) e_tail = e;
            drift = std::max(drift, std::abs(e - e_tail) / std::abs(e_tail));
        }
    }

    return ScaleFactorSolution(std::move(ts), std::move(bs), std::move(bds), drift);
}

ChainTrajectory integrate_full_chain(const std::vector<double>& q0,
                                     const std::vector<double>& v0,
                                     const TrapRamp& ramp,
                                     const ChainDynamicsOptions& opt) {
    ramp.validate();
    const int n_ions = static_cast<int>(q0.size());
    require(n_ions >= 1, ErrorCode::InvalidArgument, "chain dynamics: need at least one ion");
    require(v0.size() == q0.size(), ErrorCode::DimensionMismatch,
            "chain dynamics: position/velocity lengths disagree");
    require(std::is_sorted(q0.begin(), q0.end()), ErrorCode::InvalidArgument,
            "chain dynamics: initial positions must be ordered");
    require(opt.n_samples >= 2, ErrorCode::InvalidArgument,
            "chain dynamics: need at least 2 samples");

    const double t_end = ramp.total_time();
    // Equations of motion with lengths in initial-trap equilibrium units
    // (Coulomb coefficient becomes omega^2(0)) and time unscaled:
    // q_i'' = -omega_ax^2(t) q_i + omega_ax^2(0) sum_{j != i} sign(i-j)/(q_i-q_j)^2.
    const double om0_sq = ramp.omega_sq(0.0);

    ode::Rhs rhs = [&](double t, const ode::State& y, ode::State& dy) {
        const double w2 = ramp.omega_sq(t);
        for (int i = 0; i < n_ions; ++i) {
            dy[i] = y[n_ions + i];
            double acc = -w2 * y[i];
            for (int j = 0; j < n_ions; ++j) {
                if (j == i) continue;
                const double d = y[i] - y[j];
                require(std::abs(d) > opt.collision_floor, ErrorCode::IonCollision,
                        "chain dynamics: ion separation below floor at t=" +
                            std::to_string(t));
                acc += om0_sq * (d > 0.0 ? 1.0 : -1.0) / (d * d);
            }
            dy[n_ions + i] = acc;
        }
    };

    ChainTrajectory out;
    out.t.resize(opt.n_samples);
    for (int k = 0; k < opt.n_samples; ++k) out.t[k] = t_end * k / (opt.n_samples - 1);
    out.q = linalg::Matrix(opt.n_samples, n_ions);
    out.q_dot = linalg::Matrix(opt.n_samples, n_ions);

    int row = 0;
    auto sink = [&](double, const ode::State& y) {
        for (int i = 0; i < n_ions; ++i) {
            out.q(row, i) = y[i];
            out.q_dot(row, i) = y[n_ions + i];
        }
        ++row;
    };

    ode::State y0(2 * n_ions);
    for (int i = 0; i < n_ions; ++i) {
        y0[i] = q0[i];
        y0[n_ions + i] = v0[i];
    }

    ode::Options oopt;
    oopt.rtol = opt.rtol;
    oopt.atol = opt.rtol * 1e-2;
    ode::integrate_segmented(rhs, std::move(y0), 0.0, t_end, ramp.breakpoints(), oopt,
                             out.t, sink);
    require(row == opt.n_samples, ErrorCode::Internal,
            "chain dynamics: sample count mismatch");

    // Energy per unit mass in equilibrium length units, conserved on flat
    // segments: E = sum v_i^2/2 + w2 sum q_i^2/2 + w0^2 sum_{i<j} 1/|q_i - q_j|.
    auto energy = [&](int k, double w2) {
        double e = 0.0;
        for (int i = 0; i < n_ions; ++i) {
            e += 0.5 * out.q_dot(k, i) * out.q_dot(k, i) + 0.5 * w2 * out.q(k, i) * out.q(k, i);
            for (int j = i + 1; j < n_ions; ++j)
                e += om0_sq / std::abs(out.q(k, i) - out.q(k, j));
        }
        return e;
    };
    double drift = 0.0;
    double e_head = -1.0, e_tail = -1.0;
    const double flat_head_end = ramp.has_prep() ? ramp.prep_start() : ramp.ramp_start();
    const double w2_head = om0_sq;
    const double w2_tail = ramp.omega_sq(t_end);
    for (int k = 0; k < opt.n_samples; ++k) {
        if (out.t[k] <= flat_head_end) {
            const double e = energy(k, w2_head);
            if (e_head < 0.0) e_head = e;
            drift = std::max(drift, std::abs(e - e_head) / std::abs(e_head));
        } else if (out.t[k] >= ramp.ramp_end()) {
            const double e = energy(k, w2_tail);
            if (e_tail < 0.0) e_tail = e;
            drift = std::max(drift, std::abs(e - e_tail) / std::abs(e_tail));
        }
    }
    out.energy_drift = drift;
    return out;
}

std::vector<double> mode_coordinate(const ChainTrajectory& traj,
                                    const std::vector<double>& equilibrium,
                                    const ScaleFactorSolution& scale,
                                    const std::vector<double>& mode_vector) {
    const int n_ions = traj.q.cols();
    require(static_cast<int>(equilibrium.size()) == n_ions &&
                static_cast<int>(mode_vector.size()) == n_ions,
            ErrorCode::DimensionMismatch, "mode coordinate: dimensions disagree");
    std::vector<double> c(traj.t.size());
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        const double b = scale(traj.t[k]);
        double s = 0.0;
        for (int i = 0; i < n_ions; ++i)
            s += mode_vector[i] * (traj.q(static_cast<int>(k), i) - b * equilibrium[i]);
        c[k] = s;
    }
    return c;
}

linalg::Matrix mode_projections(const ChainTrajectory& traj,
                                const std::vector<double>& equilibrium,
                                const ScaleFactorSolution& scale,
                                const linalg::Matrix& mode_vectors) {
    const int n_ions = traj.q.cols();
    require(mode_vectors.rows() == n_ions, ErrorCode::DimensionMismatch,
            "mode projections: eigenvector matrix does not match ion count");
    linalg::Matrix c(static_cast<int>(traj.t.size()), mode_vectors.cols());
    for (int kappa = 0; kappa < mode_vectors.cols(); ++kappa) {
        std::vector<double> v(n_ions);
        for (int i = 0; i < n_ions; ++i) v[i] = mode_vectors(i, kappa);
        const auto ck = mode_coordinate(traj, equilibrium, scale, v);
        for (std::size_t k = 0; k < ck.size(); ++k)
            c(static_cast<int>(k), kappa) = ck[k];
    }
    return c;
}

double spectral_amplitude(const std::vector<double>& t, const std::vector<double>& x,
                          double omega) {
    require(t.size() == x.size() && t.size() >= 2, ErrorCode::DimensionMismatch,
            "spectral amplitude: bad sample arrays");
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t k = 0; k < t.size(); ++k)
        acc += x[k] * std::exp(std::complex<double>(0.0, -omega * t[k]));
    return 2.0 * std::abs(acc) / static_cast<double>(t.size());
}

} // namespace ioncosmo
