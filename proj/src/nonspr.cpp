#include "passync/nonspr.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace passync {

CompensatorParams default_compensator(int m) {
    CompensatorParams cp;
    cp.Phi.resize(m);
    for (int i = 1; i <= m; ++i) cp.Phi[i - 1] = 25.0 + 4.0 * i;
    cp.p.assign(m, 1.0);
    cp.q.assign(m, 10.0);
    cp.Th.assign(m, 2.0);
    cp.th0 = 2.0;
    cp.Ks.assign(m, 5.0);
    cp.G1.assign(m, 25.0);
    cp.G2.assign(m, 25.0);
    cp.G3.assign(m, 25.0);
    return cp;
}

void validate(const CompensatorParams& cp) {
    const size_t m = cp.Phi.size();
    if (cp.p.size() != m || cp.q.size() != m || cp.Th.size() != m || cp.Ks.size() != m ||
        cp.G1.size() != m || cp.G2.size() != m || cp.G3.size() != m)
        throw std::runtime_error("compensator vectors must share one length");
    for (size_t i = 0; i < m; ++i) {
        if (!(cp.Phi[i] > 0 && cp.p[i] > 0 && cp.q[i] > 0 && cp.Th[i] > 0 && cp.Ks[i] > 0 &&
              cp.G1[i] > 0 && cp.G2[i] > 0 && cp.G3[i] > 0))
            throw std::runtime_error("compensator parameters must be positive");
        if (!(cp.p[i] < cp.q[i]))
            throw std::runtime_error("phase lead requires p < q");
    }
    if (!(cp.th0 > 0)) throw std::runtime_error("th0 must be positive");
}

LeadOut lead_filter_step_deriv(double state, double in, double p, double q, double phi) {
    return {-q * state + in, phi * ((p - q) * state + in)};
}

namespace {

// Shared inverse-compensator filters on the leader derivatives.
inline void leader_filters(const CompensatorParams& cp, const double* o2, const double* o1,
                           const Leader3& L, int m, NonSprSignals& sig, double* do2, double* do1) {
    sig.Om2.resize(m);
    sig.Om1.resize(m);
    for (int i = 0; i < m; ++i) {
        // C_w^{-1} = (1/phi)(s + q)/(s + p)
        LeadOut a = lead_filter_step_deriv(o2[i], L.ddx0, cp.q[i], cp.p[i], 1.0 / cp.Phi[i]);
        LeadOut b = lead_filter_step_deriv(o1[i], L.dx0, cp.q[i], cp.p[i], 1.0 / cp.Phi[i]);
        sig.Om2[i] = a.out;
        do2[i] = a.dstate;
        sig.Om1[i] = b.out;
        do1[i] = b.dstate;
    }
}

}  // namespace

void scenario1_control(const Network& net, const CompensatorParams& cp, const double* x,
                       const double* v, const double* o2, const double* o1, const double* cw,
                       const double* Kh, const double* Jh, const double* Bh, const Leader3& L,
                       double* u, NonSprSignals& sig, double* do2, double* do1, double* dcw) {
    const int m = net.m;
    sig.ebar.resize(m);
    leader_filters(cp, o2, o1, L, m, sig, do2, do1);
    Vec& y = sig.ebar;  // reuse: y first, overwritten by e_y below
    static thread_local Vec ybuf, zy;
    ybuf.resize(m);
    zy.resize(m);
    const double y0 = L.dx0 + cp.th0 * L.x0;
    for (int i = 0; i < m; ++i) ybuf[i] = v[i] + cp.Th[i] * x[i];
    net.amul(ybuf.data(), zy.data());
    for (int i = 0; i < m; ++i) {
        zy[i] += net.a0[i] * y0;
        y[i] = zy[i] - ybuf[i];  // e_y
        const double rw = Jh[i] * sig.Om2[i] + Bh[i] * sig.Om1[i] + Kh[i] * zy[i];
        const double cin = rw - Kh[i] * ybuf[i];
        LeadOut lo = lead_filter_step_deriv(cw[i], cin, cp.p[i], cp.q[i], cp.Phi[i]);
        u[i] = lo.out;
        dcw[i] = lo.dstate;
    }
}

void scenario1_adapt_deriv(const CompensatorParams& cp, const NonSprSignals& sig, int m,
                           double* dKh, double* dJh, double* dBh) {
    for (int i = 0; i < m; ++i) {
        dKh[i] = cp.G1[i] * sig.ebar[i] * sig.ebar[i];
        dJh[i] = cp.G2[i] * sig.ebar[i] * sig.Om2[i];
        dBh[i] = cp.G3[i] * sig.ebar[i] * sig.Om1[i];
    }
}

void scenario2_control(const Network& net, const CompensatorParams& cp, const double* x,
                       const double* v, const double* o2, const double* o1, const double* cw,
                       const double* f1, const double* f2, const double* f3, const double* Kh,
                       const double* Jh, const double* Bh, const Leader3& L, double* u,
                       NonSprSignals& sig, double* do2, double* do1, double* dcw, double* df1,
                       double* df2, double* df3) {
    (void)v;  // local velocity unused: position-only exchange and position-only local loop
    const int m = net.m;
    sig.ebar.resize(m);
    leader_filters(cp, o2, o1, L, m, sig, do2, do1);
    static thread_local Vec z;
    z.resize(m);
    net.amul(x, z.data());
    for (int i = 0; i < m; ++i) {
        z[i] += net.a0[i] * L.x0;
        sig.ebar[i] = z[i] - x[i];
        const double rw = Jh[i] * sig.Om2[i] + Bh[i] * sig.Om1[i] + Kh[i] * z[i];
        const double cin = rw - Kh[i] * x[i];
        LeadOut lo = lead_filter_step_deriv(cw[i], cin, cp.p[i], cp.q[i], cp.Phi[i]);
        u[i] = lo.out;
        dcw[i] = lo.dstate;
        df1[i] = -cp.Th[i] * f1[i] + sig.ebar[i];
        df2[i] = -cp.Th[i] * f2[i] + sig.Om2[i];
        df3[i] = -cp.Th[i] * f3[i] + sig.Om1[i];
    }
}

void scenario2_adapt_deriv(const CompensatorParams& cp, const NonSprSignals& sig,
                           const double* f1, const double* f2, const double* f3, int m,
                           double* dKh, double* dJh, double* dBh) {
    for (int i = 0; i < m; ++i) {
        dKh[i] = cp.G1[i] * sig.ebar[i] * f1[i];
        dJh[i] = cp.G2[i] * sig.ebar[i] * f2[i];
        dBh[i] = cp.G3[i] * sig.ebar[i] * f3[i];
    }
}

NonSprCert nonspr_certify(const PlantParams& p, const CompensatorParams& cp, NonSprMap which,
                          const Vec& omega) {
    if (omega.empty()) throw std::runtime_error("GridEmpty");
    const int m = static_cast<int>(p.J.size());
    NonSprCert rep;
    rep.min_re.assign(m, std::numeric_limits<double>::infinity());
    rep.rel_degree = (which == NonSprMap::Unshaped) ? 2 : 1;
    rep.max_root_re = -std::numeric_limits<double>::infinity();
    using cd = std::complex<double>;
    for (int i = 0; i < m; ++i) {
        const double J = p.J[i], b = p.B[i], phi = cp.Phi[i], pz = cp.p[i], qz = cp.q[i],
                     Th = cp.Th[i], Ks = cp.Ks[i];
        for (double w : omega) {
            cd s(0.0, w);
            cd base = J * s * s * (s + qz) + b * s * (s + qz);
            cd num, den;
            switch (which) {
                case NonSprMap::Unshaped:
                    num = phi * (s + pz);
                    den = base + Ks * phi * (s + pz);
                    break;
                case NonSprMap::Scenario1Shaped:
                    num = phi * (s + pz) * (s + Th);
                    den = base + Ks * phi * (s + pz) * (s + Th);
                    break;
                case NonSprMap::Scenario2Composite:
                    num = phi * (s + pz) * (s + Th);
                    den = base + Ks * phi * (s + pz);
                    break;
            }
            rep.min_re[i] = std::min(rep.min_re[i], (num / den).real());
        }
        Vec cub;
        if (which == NonSprMap::Scenario1Shaped)
            cub = {J, J * qz + b + Ks * phi, b * qz + Ks * phi * (pz + Th), Ks * phi * pz * Th};
        else
            cub = {J, J * qz + b, b * qz + Ks * phi, Ks * phi * pz};
        for (auto& r : poly_roots(cub)) rep.max_root_re = std::max(rep.max_root_re, r.real());
    }
    if (rep.rel_degree > 1) {
        rep.verdict = false;
        rep.reason = "relative degree 2";
        return rep;
    }
    double mn = std::numeric_limits<double>::infinity();
    for (double v : rep.min_re) mn = std::min(mn, v);
    if (!(rep.max_root_re < 0.0)) {
        rep.verdict = false;
        rep.reason = "UnstableClosedLoop";
    } else if (!(mn > 0.0)) {
        rep.verdict = false;
        rep.reason = "min Re <= 0 on grid";
    } else {
        rep.verdict = true;
        rep.reason = "SPR";
    }
    return rep;
}

}  // namespace passync
