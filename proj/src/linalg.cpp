#include "passync/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace passync {

using cd = std::complex<double>;

namespace {

struct Givens {
    cd c, s;  // [conj(c) conj(s); -s c] zeroes the second component
};

Givens make_givens(cd f, cd g) {
    double af = std::abs(f), ag = std::abs(g);
    if (ag == 0.0) return {cd(1.0, 0.0), cd(0.0, 0.0)};
    if (af == 0.0) return {cd(0.0, 0.0), cd(1.0, 0.0)};
    double r = std::hypot(af, ag);
    cd c = f / r;
    cd s = g / r;
    return {c, s};
}

class CMat {
  public:
    explicit CMat(int n) : n_(n), a_(static_cast<size_t>(n) * n) {}
    cd& at(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    int n() const { return n_; }

  private:
    int n_;
    std::vector<cd> a_;
};

// Householder reduction to upper Hessenberg form (eigenvalues preserved).
void hessenberg(CMat& H) {
    const int n = H.n();
    std::vector<cd> v(n);
    for (int k = 0; k + 2 < n; ++k) {
        double xnorm = 0.0;
        for (int i = k + 1; i < n; ++i) xnorm = std::hypot(xnorm, std::abs(H.at(i, k)));
        if (xnorm == 0.0) continue;
        cd x0 = H.at(k + 1, k);
        cd phase = (std::abs(x0) == 0.0) ? cd(1.0, 0.0) : x0 / std::abs(x0);
        cd alpha = -phase * xnorm;
        double vnorm2 = 0.0;
        v[k + 1] = x0 - alpha;
        for (int i = k + 2; i < n; ++i) v[i] = H.at(i, k);
        for (int i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 == 0.0) continue;
        // H := (I - 2 v v* / v*v) H
        for (int j = k; j < n; ++j) {
            cd dot(0.0, 0.0);
            for (int i = k + 1; i < n; ++i) dot += std::conj(v[i]) * H.at(i, j);
            dot *= 2.0 / vnorm2;
            for (int i = k + 1; i < n; ++i) H.at(i, j) -= dot * v[i];
        }
        // H := H (I - 2 v v* / v*v)
        for (int i = 0; i < n; ++i) {
            cd dot(0.0, 0.0);
            for (int j = k + 1; j < n; ++j) dot += H.at(i, j) * v[j];
            dot *= 2.0 / vnorm2;
            for (int j = k + 1; j < n; ++j) H.at(i, j) -= dot * std::conj(v[j]);
        }
        for (int i = k + 2; i < n; ++i) H.at(i, k) = cd(0.0, 0.0);
    }
}

void eig2x2(cd a, cd b, cd c, cd d, cd& l1, cd& l2) {
    cd tr = 0.5 * (a + d);
    cd disc = std::sqrt(tr * tr - (a * d - b * c));
    l1 = tr + disc;
    l2 = tr - disc;
}

}  // namespace

std::vector<cd> eigenvalues(const Mat& A) {
    const int n = A.n;
    std::vector<cd> eig(n);
    if (n == 0) return eig;
    CMat H(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) H.at(i, j) = cd(A(i, j), 0.0);
    if (n == 1) return {H.at(0, 0)};
    hessenberg(H);

    const double eps = std::numeric_limits<double>::epsilon();
    int m = n - 1;
    int its = 0;
    long total = 0;
    std::vector<Givens> rot(n);
    while (m >= 0) {
        if (++total > 200L * n) throw std::runtime_error("eigenvalues: QR iteration failed to converge");
        int l = m;
        while (l > 0) {
            double s = std::abs(H.at(l - 1, l - 1)) + std::abs(H.at(l, l));
            if (s == 0.0) s = 1.0;
            if (std::abs(H.at(l, l - 1)) <= eps * s) {
                H.at(l, l - 1) = cd(0.0, 0.0);
                break;
            }
            --l;
        }
        if (l == m) {
            eig[m] = H.at(m, m);
            --m;
            its = 0;
            continue;
        }
        if (l == m - 1) {
            eig2x2(H.at(m - 1, m - 1), H.at(m - 1, m), H.at(m, m - 1), H.at(m, m), eig[m - 1], eig[m]);
            m -= 2;
            its = 0;
            continue;
        }
        // Wilkinson shift from the trailing 2x2 of the active block.
        cd l1, l2;
        eig2x2(H.at(m - 1, m - 1), H.at(m - 1, m), H.at(m, m - 1), H.at(m, m), l1, l2);
        cd sigma = (std::abs(l1 - H.at(m, m)) < std::abs(l2 - H.at(m, m))) ? l1 : l2;
        if (++its > 30) {  // exceptional shift to break limit cycles
            sigma = H.at(m, m) + cd(std::abs(H.at(m, m - 1).real()) + std::abs(H.at(m - 1, m - 2).real()), 0.0);
            its = 0;
        }
        for (int i = l; i <= m; ++i) H.at(i, i) -= sigma;
        for (int k = l; k < m; ++k) {
            rot[k] = make_givens(H.at(k, k), H.at(k + 1, k));
            const cd c = rot[k].c, s = rot[k].s;
            for (int j = k; j <= m; ++j) {
                cd hk = H.at(k, j), hk1 = H.at(k + 1, j);
                H.at(k, j) = std::conj(c) * hk + std::conj(s) * hk1;
                H.at(k + 1, j) = -s * hk + c * hk1;
            }
        }
        for (int k = l; k < m; ++k) {
            const cd c = rot[k].c, s = rot[k].s;
            int top = std::min(k + 2, m);
            for (int i = l; i <= top; ++i) {
                cd hk = H.at(i, k), hk1 = H.at(i, k + 1);
                H.at(i, k) = hk * c + hk1 * s;
                H.at(i, k + 1) = -hk * std::conj(s) + hk1 * std::conj(c);
            }
        }
        for (int i = l; i <= m; ++i) H.at(i, i) += sigma;
    }
    return eig;
}

std::vector<cd> poly_roots(const Vec& coeffs) {
    size_t first = 0;
    while (first < coeffs.size() && coeffs[first] == 0.0) ++first;
    if (coeffs.size() - first < 2) return {};
    const int d = static_cast<int>(coeffs.size() - first - 1);
    Mat C(d);
    for (int j = 0; j < d; ++j) C(0, j) = -coeffs[first + 1 + j] / coeffs[first];
    for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
    return eigenvalues(C);
}

}  // namespace passync
