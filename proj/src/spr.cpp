#include "passync/spr.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace passync {

SprGains paper_spr_gains(int m) {
    SprGains g;
    g.Phi.resize(m);
    g.Lam.assign(m, 1.0);
    g.G1.assign(m, 5.0);
    g.G2.assign(m, 5.0);
    for (int i = 1; i <= m; ++i) g.Phi[i - 1] = 1.5 + 0.5 * i;
    return g;
}

void spr_control(const Network& net, const SprGains& g, const double* x, const double* v,
                 const double* ie, const double* Jh, const double* Bh, const Leader3& L,
                 double* u, SprSignals& sig) {
    const int m = net.m;
    sig.zbar.resize(m);
    sig.ebar.resize(m);
    sig.debar.resize(m);
    sig.zeta.resize(m);
    sig.theta.resize(m);
    net.amul(x, sig.zbar.data());
    net.amul(v, sig.debar.data());
    for (int i = 0; i < m; ++i) {
        sig.zbar[i] += net.a0[i] * L.x0;
        sig.ebar[i] = sig.zbar[i] - x[i];
        sig.debar[i] += net.a0[i] * L.dx0 - v[i];
        const double lam = g.Lam[i], lam2 = lam * lam;
        sig.zeta[i] = L.ddx0 + 2.0 * lam * sig.debar[i] + lam2 * sig.ebar[i];
        sig.theta[i] = sig.debar[i] + 2.0 * lam * sig.ebar[i] + lam2 * ie[i];
        u[i] = g.Phi[i] * sig.theta[i] + Jh[i] * sig.zeta[i] + Bh[i] * v[i];
    }
}

void spr_adapt_deriv(const SprGains& g, const SprSignals& sig, const double* v, int m,
                     double* dJh, double* dBh) {
    for (int i = 0; i < m; ++i) {
        dJh[i] = g.G1[i] * sig.theta[i] * sig.zeta[i];
        dBh[i] = g.G2[i] * sig.theta[i] * v[i];
    }
}

RhReport rh_gain_check(const PlantParams& p, const SprGains& g) {
    const int m = static_cast<int>(p.J.size());
    RhReport rep;
    rep.margin.resize(m);
    rep.all_pass = true;
    for (int i = 0; i < m; ++i) {
        rep.margin[i] = 2.0 * (p.B[i] + g.Phi[i]) - p.J[i] * g.Lam[i];
        if (!(rep.margin[i] > 0.0)) rep.all_pass = false;
    }
    return rep;
}

Vec default_omega_grid(int points, double lo, double hi) {
    Vec w(points);
    const double llo = std::log10(lo), lhi = std::log10(hi);
    for (int k = 0; k < points; ++k)
        w[k] = std::pow(10.0, llo + (lhi - llo) * k / (points - 1));
    return w;
}

FreqReport spr_certify_frequency(const PlantParams& p, const SprGains& g, const Vec& omega) {
    const int m = static_cast<int>(p.J.size());
    if (omega.empty()) throw std::runtime_error("GridEmpty");
    FreqReport rep;
    rep.min_re.assign(m, std::numeric_limits<double>::infinity());
    RhReport rh = rh_gain_check(p, g);
    using cd = std::complex<double>;
    for (int i = 0; i < m; ++i) {
        const double J = p.J[i], b = p.B[i], phi = g.Phi[i], lam = g.Lam[i];
        for (double w : omega) {
            cd s(0.0, w);
            cd num = phi * (s + lam) * (s + lam);
            cd den = J * s * s * s + (b + phi) * s * s + 2.0 * phi * lam * s + phi * lam * lam;
            rep.min_re[i] = std::min(rep.min_re[i], (num / den).real());
        }
    }
    rep.verdict = rh.all_pass;
    for (int i = 0; i < m; ++i)
        if (!(rep.min_re[i] > 0.0)) rep.verdict = false;
    return rep;
}

}  // namespace passync
