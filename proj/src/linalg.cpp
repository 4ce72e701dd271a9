#include "ioncosmo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ioncosmo/errors.hpp"

namespace ioncosmo::linalg {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

Matrix matmul(const Matrix& lhs, const Matrix& rhs) {
    require(lhs.cols() == rhs.rows(), ErrorCode::DimensionMismatch,
            "matmul: inner dimensions disagree");
    Matrix out(lhs.rows(), rhs.cols());
    for (int i = 0; i < lhs.rows(); ++i) {
        for (int k = 0; k < lhs.cols(); ++k) {
            const double aik = lhs(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < rhs.cols(); ++j)
                out(i, j) += aik * rhs(k, j);
        }
    }
    return out;
}

std::vector<double> matvec(const Matrix& m, const std::vector<double>& v) {
    require(m.cols() == static_cast<int>(v.size()), ErrorCode::DimensionMismatch,
            "matvec: dimensions disagree");
    std::vector<double> out(m.rows(), 0.0);
    for (int i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            s += m(i, j) * m(i, j);
    return std::sqrt(s);
}

double max_abs(const Matrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            s = std::max(s, std::abs(m(i, j)));
    return s;
}

std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
    const int n = a.rows();
    require(a.cols() == n, ErrorCode::DimensionMismatch, "solve_linear: matrix not square");
    require(static_cast<int>(b.size()) == n, ErrorCode::DimensionMismatch,
            "solve_linear: rhs length disagrees");

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(a(col, col));
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > best) {
                best = std::abs(a(r, col));
                pivot = r;
            }
        }
        require(best > 0.0, ErrorCode::NoConvergence, "solve_linear: singular matrix");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
            std::swap(b[pivot], b[col]);
        }
        const double inv = 1.0 / a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) * inv;
            if (f == 0.0) continue;
            a(r, col) = 0.0;
            for (int c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
        x[r] = s / a(r, r);
    }
    return x;
}

namespace {

double offdiag_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

} // namespace

EigenResult jacobi_eigensystem(Matrix a, double off_tol, int max_sweeps) {
    const int n = a.rows();
    require(a.cols() == n, ErrorCode::DimensionMismatch, "jacobi: matrix not square");
    double asym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
    require(asym <= 1e-12 * (1.0 + max_abs(a)), ErrorCode::InvalidArgument,
            "jacobi: matrix not symmetric");

    Matrix v = Matrix::identity(n);
    const double scale = std::max(1.0, frobenius_norm(a));

    int sweep = 0;
    while (offdiag_norm(a) > off_tol * scale) {
        require(sweep++ < max_sweeps, ErrorCode::NoConvergence,
                "jacobi: sweep limit reached");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = a(i, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int lhs, int rhs) { return diag[lhs] < diag[rhs]; });

    EigenResult out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        const int src = order[k];
        out.values[k] = diag[src];
        int arg = 0;
        double best = 0.0;
        double norm = 0.0;
        for (int r = 0; r < n; ++r) {
            const double val = v(r, src);
            norm += val * val;
            if (std::abs(val) > best) {
                best = std::abs(val);
                arg = r;
            }
        }
        const double sign = v(arg, src) < 0.0 ? -1.0 : 1.0;
        const double inv = sign / std::sqrt(norm);
        for (int r = 0; r < n; ++r) out.vectors(r, k) = v(r, src) * inv;
    }
    return out;
}

Matrix expm(const Matrix& m) {
    const int n = m.rows();
    require(m.cols() == n, ErrorCode::DimensionMismatch, "expm: matrix not square");

    // Scale so the Taylor series converges fast, then square back.
    const double norm = max_abs(m) * n;
    int squarings = 0;
    double factor = 1.0;
    while (norm * factor > 0.5) {
        factor *= 0.5;
        ++squarings;
    }

    Matrix scaled(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            scaled(i, j) = m(i, j) * factor;

    Matrix result = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (int k = 1; k <= 24; ++k) {
        term = matmul(term, scaled);
        const double inv = 1.0 / k;
        double largest = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                term(i, j) *= inv;
                result(i, j) += term(i, j);
                largest = std::max(largest, std::abs(term(i, j)));
            }
        }
        if (largest < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) result = matmul(result, result);
    return result;
}

} // namespace ioncosmo::linalg
