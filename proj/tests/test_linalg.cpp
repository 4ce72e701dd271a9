#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ioncosmo/errors.hpp"
#include "ioncosmo/linalg.hpp"

using namespace ioncosmo;
using linalg::Matrix;

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

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c)
            worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
    return worst;
}

} // namespace

TEST_CASE("matrix product and transpose on small known values") {
    Matrix a(2, 3);
    a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = 3;
    a(1, 0) = 4; a(1, 1) = 5; a(1, 2) = 6;
    Matrix b(3, 2);
    b(0, 0) = 7;  b(0, 1) = 8;
    b(1, 0) = 9;  b(1, 1) = 10;
    b(2, 0) = 11; b(2, 1) = 12;

    Matrix p = linalg::matmul(a, b);
    CHECK(p.rows() == 2);
    CHECK(p.cols() == 2);
    CHECK(p(0, 0) == 58.0);
    CHECK(p(0, 1) == 64.0);
    CHECK(p(1, 0) == 139.0);
    CHECK(p(1, 1) == 154.0);

    Matrix at = a.transposed();
    CHECK(at.rows() == 3);
    CHECK(at(2, 1) == 6.0);

    std::vector<double> v{1.0, -1.0, 2.0};
    std::vector<double> av = linalg::matvec(a, v);
    CHECK(av[0] == 5.0);
    CHECK(av[1] == 11.0);

    CHECK(code_of([&] { linalg::matmul(a, a); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([&] { linalg::matvec(b, v); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("norms") {
    Matrix m(2, 2);
    m(0, 0) = 3.0; m(0, 1) = 0.0;
    m(1, 0) = 4.0; m(1, 1) = 0.0;
    CHECK(linalg::frobenius_norm(m) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(linalg::max_abs(m) == 4.0);
}

TEST_CASE("linear solve recovers a known solution") {
    Matrix a(3, 3);
    a(0, 0) = 4; a(0, 1) = 1; a(0, 2) = 0;
    a(1, 0) = 1; a(1, 1) = 3; a(1, 2) = 1;
    a(2, 0) = 0; a(2, 1) = 1; a(2, 2) = 2;
    std::vector<double> x_true{1.0, -2.0, 3.0};
    std::vector<double> b = linalg::matvec(a, x_true);

    std::vector<double> x = linalg::solve_linear(a, b);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(x[i] - x_true[i]) <= 1e-12);
}

TEST_CASE("singular systems are rejected") {
    Matrix a(2, 2);
    a(0, 0) = 1; a(0, 1) = 2;
    a(1, 0) = 2; a(1, 1) = 4;
    CHECK(code_of([&] { linalg::solve_linear(a, {1.0, 2.0}); }) ==
          ErrorCode::NoConvergence);
}

TEST_CASE("jacobi eigenvalues match the closed form for a 2x2") {
    // [[2,1],[1,3]] has eigenvalues (5 -+ sqrt(5)) / 2.
    Matrix a(2, 2);
    a(0, 0) = 2; a(0, 1) = 1;
    a(1, 0) = 1; a(1, 1) = 3;
    linalg::EigenResult eig = linalg::jacobi_eigensystem(a);
    const double s = std::sqrt(5.0);
    CHECK(std::abs(eig.values[0] - (5.0 - s) / 2.0) <= 1e-14);
    CHECK(std::abs(eig.values[1] - (5.0 + s) / 2.0) <= 1e-14);

    // Residual A v = lambda v and unit norms.
    for (int k = 0; k < 2; ++k) {
        std::vector<double> v{eig.vectors(0, k), eig.vectors(1, k)};
        std::vector<double> av = linalg::matvec(a, v);
        CHECK(std::abs(av[0] - eig.values[k] * v[0]) <= 1e-13);
        CHECK(std::abs(av[1] - eig.values[k] * v[1]) <= 1e-13);
        CHECK(std::abs(v[0] * v[0] + v[1] * v[1] - 1.0) <= 1e-14);
    }
}

TEST_CASE("jacobi eigenvectors are orthonormal and deterministically signed") {
    const int n = 6;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = 1.0 / (1.0 + std::abs(i - j)) + (i == j ? i : 0.0);

    linalg::EigenResult eig = linalg::jacobi_eigensystem(a);
    Matrix vtv = linalg::matmul(eig.vectors.transposed(), eig.vectors);
    CHECK(max_abs_diff(vtv, Matrix::identity(n)) <= 1e-13);

    for (int k = 0; k + 1 < n; ++k) CHECK(eig.values[k] <= eig.values[k + 1]);

    // Sign convention: the largest-magnitude component of each column is
    // positive, so repeated runs give identical vectors.
    for (int k = 0; k < n; ++k) {
        int arg = 0;
        for (int i = 1; i < n; ++i)
            if (std::abs(eig.vectors(i, k)) > std::abs(eig.vectors(arg, k))) arg = i;
        CHECK(eig.vectors(arg, k) > 0.0);
    }

    linalg::EigenResult again = linalg::jacobi_eigensystem(a);
    CHECK(max_abs_diff(eig.vectors, again.vectors) == 0.0);
}

TEST_CASE("jacobi rejects asymmetric input") {
    Matrix a(2, 2);
    a(0, 0) = 1; a(0, 1) = 2;
    a(1, 0) = 0; a(1, 1) = 1;
    CHECK(code_of([&] { linalg::jacobi_eigensystem(a); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("matrix exponential of a rotation generator") {
    const double theta = 0.7;
    Matrix g(2, 2);
    g(0, 0) = 0.0; g(0, 1) = -theta;
    g(1, 0) = theta; g(1, 1) = 0.0;
    Matrix r = linalg::expm(g);
    CHECK(std::abs(r(0, 0) - std::cos(theta)) <= 1e-15);
    CHECK(std::abs(r(0, 1) + std::sin(theta)) <= 1e-15);
    CHECK(std::abs(r(1, 0) - std::sin(theta)) <= 1e-15);
    CHECK(std::abs(r(1, 1) - std::cos(theta)) <= 1e-15);

    // Orthogonality survives for larger skew generators.
    Matrix g2(4, 4);
    g2(0, 2) = 2.3; g2(2, 0) = -2.3;
    g2(1, 3) = -1.1; g2(3, 1) = 1.1;
    g2(0, 1) = 0.4; g2(1, 0) = -0.4;
    Matrix q = linalg::expm(g2);
    Matrix qtq = linalg::matmul(q.transposed(), q);
    CHECK(max_abs_diff(qtq, Matrix::identity(4)) <= 1e-13);
}

TEST_CASE("matrix exponential of a diagonal matrix") {
    Matrix d(2, 2);
    d(0, 0) = 1.0; d(1, 1) = -2.0;
    Matrix e = linalg::expm(d);
    CHECK(std::abs(e(0, 0) - std::exp(1.0)) <= 1e-14);
    CHECK(std::abs(e(1, 1) - std::exp(-2.0)) <= 1e-14);
    CHECK(e(0, 1) == 0.0);
}
