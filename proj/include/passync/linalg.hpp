#pragma once
#include <complex>
#include <vector>

namespace passync {

using Vec = std::vector<double>;

// Dense square matrix, row-major.
struct Mat {
    int n = 0;
    std::vector<double> a;
    Mat() = default;
    explicit Mat(int n) : n(n), a(static_cast<size_t>(n) * n, 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

// Eigenvalues of a general (non-symmetric) real matrix: Householder reduction to
// Hessenberg form followed by shifted QR iteration in complex arithmetic.
std::vector<std::complex<double>> eigenvalues(const Mat& A);

// Roots of a real polynomial c[0]*x^d + ... + c[d] via companion-matrix eigenvalues.
std::vector<std::complex<double>> poly_roots(const Vec& coeffs);

}  // namespace passync
