#pragma once

#include <cstddef>
#include <vector>

namespace ioncosmo::linalg {

// Dense row-major matrix of doubles. Small fixed-size problems only (chain
// Hessians, Fock-space operators); no view/expression machinery on purpose.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    double& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }

    const double* data() const noexcept { return a_.data(); }
    double* data() noexcept { return a_.data(); }

    Matrix transposed() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

Matrix matmul(const Matrix& lhs, const Matrix& rhs);
std::vector<double> matvec(const Matrix& m, const std::vector<double>& v);

double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);

// Solves A x = b by LU decomposition with partial pivoting. A must be square
// and nonsingular.
std::vector<double> solve_linear(Matrix a, std::vector<double> b);

struct EigenResult {
    std::vector<double> values; // ascending
    Matrix vectors;             // column k pairs with values[k], unit norm
};

// Cyclic Jacobi for real symmetric matrices. Sweeps until the off-diagonal
// Frobenius norm drops below off_tol relative to the matrix norm. Eigenvalues
// are sorted ascending; each eigenvector's largest-magnitude component is made
// positive so results are reproducible across runs.
EigenResult jacobi_eigensystem(Matrix a, double off_tol = 1e-14, int max_sweeps = 128);

// Matrix exponential by scaling-and-squaring with a Taylor kernel. Accurate to
// near machine precision for the modest norms used here; the skew-symmetric
// generators this project feeds in yield exactly orthogonal results up to
// roundoff.
Matrix expm(const Matrix& m);

} // namespace ioncosmo::linalg
