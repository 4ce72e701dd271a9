#include "ioncosmo/chain.hpp"

#include <algorithm>
#include <cmath>

#include "ioncosmo/errors.hpp"

namespace ioncosmo {

namespace {

void check_ordered(const std::vector<double>& u) {
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        require(u[i + 1] - u[i] > 1e-12, ErrorCode::DegeneratePositions,
                "chain: positions must be strictly ascending");
    }
}

std::vector<double> forces(const std::vector<double>& u) {
    const int n = static_cast<int>(u.size());
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) {
        double s = -u[i];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = u[i] - u[j];
            s += (d > 0.0 ? 1.0 : -1.0) / (d * d);
        }
        f[i] = s;
    }
    return f;
}

void mirror_symmetrize(std::vector<double>& u) {
    const int n = static_cast<int>(u.size());
    for (int i = 0; i < n / 2; ++i) {
        const double s = 0.5 * (u[i] - u[n - 1 - i]);
        u[i] = s;
        u[n - 1 - i] = -s;
    }
    if (n % 2 == 1) u[n / 2] = 0.0;
}

} // namespace

double force_residual(const std::vector<double>& u) {
    check_ordered(u);
    double r = 0.0;
    for (double f : forces(u)) r = std::max(r, std::abs(f));
    return r;
}

std::vector<double> solve_equilibrium(int n_ions, double tol) {
    require(n_ions >= 1, ErrorCode::InvalidArgument, "chain: n_ions must be >= 1");
    require(n_ions <= 512, ErrorCode::InvalidArgument, "chain: n_ions too large");
    require(tol > 0.0, ErrorCode::InvalidArgument, "chain: tol must be positive");

    std::vector<double> u(n_ions);
    // Uniform seed with spacing 2; the true spacings are within a factor of a
    // few for moderate N, which is inside Newton's basin here.
    for (int i = 0; i < n_ions; ++i) u[i] = 2.0 * (i - 0.5 * (n_ions - 1));
    if (n_ions == 1) return u;

    double res = force_residual(u);
    for (int iter = 0; iter < 200; ++iter) {
        if (res <= tol) return u;

        // Newton direction: J = I + A (trap curvature plus Coulomb curvature).
        linalg::Matrix j = coulomb_hessian(u);
        for (int i = 0; i < n_ions; ++i) j(i, i) += 1.0;
        std::vector<double> step = linalg::solve_linear(j, forces(u));

        double lambda = 1.0;
        for (int tries = 0; tries < 60; ++tries) {
            std::vector<double> trial = u;
            for (int i = 0; i < n_ions; ++i) trial[i] += lambda * step[i];
            mirror_symmetrize(trial);
            if (std::is_sorted(trial.begin(), trial.end())) {
                bool distinct = true;
                for (int i = 0; i + 1 < n_ions; ++i)
                    if (trial[i + 1] - trial[i] <= 1e-12) distinct = false;
                if (distinct) {
                    const double trial_res = force_residual(trial);
                    if (trial_res < res || trial_res <= tol) {
                        u = std::move(trial);
                        res = trial_res;
                        break;
                    }
                }
            }
            lambda *= 0.5;
            require(tries < 59, ErrorCode::NoConvergence,
                    "chain: damped Newton step stalled");
        }
    }
    fail(ErrorCode::NoConvergence, "chain: equilibrium iteration did not converge");
}

linalg::Matrix coulomb_hessian(const std::vector<double>& positions) {
    check_ordered(positions);
    const int n = static_cast<int>(positions.size());
    linalg::Matrix a(n, n);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = std::abs(positions[i] - positions[j]);
            const double w = 2.0 / (d * d * d);
            a(i, j) = -w;
            diag += w;
        }
        a(i, i) = diag;
    }
    return a;
}

NormalModes normal_modes(const linalg::Matrix& hessian, double clamp_tol) {
    auto eig = linalg::jacobi_eigensystem(hessian);
    NormalModes out;
    out.vectors = std::move(eig.vectors);
    out.freqs_sq = std::move(eig.values);
    for (double& v : out.freqs_sq) {
        require(v > -clamp_tol, ErrorCode::Validation,
                "chain: Hessian has a genuinely negative eigenvalue " + std::to_string(v));
        if (std::abs(v) <= clamp_tol) v = 0.0;
    }
    return out;
}

ChainConfiguration analyze_chain(int n_ions, double tol) {
    ChainConfiguration cfg;
    cfg.n_ions = n_ions;
    cfg.positions = solve_equilibrium(n_ions, tol);
    cfg.equilibrium_residual = n_ions == 1 ? 0.0 : force_residual(cfg.positions);
    if (n_ions == 1) {
        cfg.hessian = linalg::Matrix(1, 1, 0.0);
        cfg.mode_freqs_sq = {0.0};
        cfg.mode_vectors = linalg::Matrix(1, 1, 1.0);
        return cfg;
    }
    cfg.hessian = coulomb_hessian(cfg.positions);
    auto modes = normal_modes(cfg.hessian);
    cfg.mode_freqs_sq = std::move(modes.freqs_sq);
    cfg.mode_vectors = std::move(modes.vectors);
    return cfg;
}

} // namespace ioncosmo
