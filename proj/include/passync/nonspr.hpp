#pragma once
#include <string>

#include "passync/graph.hpp"
#include "passync/plant.hpp"
#include "passync/signals.hpp"

namespace passync {

struct CompensatorParams {
    Vec Phi;     // compensator gains, > 0
    Vec p, q;    // lead zero/pole pairs, 0 < p_i < q_i
    Vec Th;      // shaping constants, > 0
    double th0 = 0.0;  // leader shaping constant
    Vec Ks;      // nominal feedback gains, > 0
    Vec G1, G2, G3;    // adaptation gains (K, J, B channels)
};

// Defaults validated by nonspr_certify (the certifier, not the config, is authoritative).
CompensatorParams default_compensator(int m);
void validate(const CompensatorParams& cp);

struct LeadOut {
    double dstate = 0.0;
    double out = 0.0;
};

// Minimal realization of phi (s + p) / (s + q): dstate = -q state + in,
// out = phi ((p - q) state + in). The inverse filter swaps p and q with gain 1/phi.
LeadOut lead_filter_step_deriv(double state, double in, double p, double q, double phi);

// Per-step derived quantities shared by both scenarios.
struct NonSprSignals {
    Vec ebar;      // shaped consensus error e_y (Scenario 1) or plain e (Scenario 2)
    Vec Om2, Om1;  // leader-filtered regressor channels C_w^{-1} ddx0, C_w^{-1} dx0
};

// Scenario 1 (output shaping, local velocity available):
// y = v + Th x, y0 = dx0 + th0 x0, zy = A_m y + A_0 y0, e_y = zy - y,
// r_w = Jh Om2 + Bh Om1 + Kh zy, u = C_w (r_w - Kh y).
void scenario1_control(const Network& net, const CompensatorParams& cp, const double* x,
                       const double* v, const double* o2, const double* o1, const double* cw,
                       const double* Kh, const double* Jh, const double* Bh, const Leader3& L,
                       double* u, NonSprSignals& sig, double* do2, double* do1, double* dcw);

// Gradient law descending the shaped error model e_y = -W_w Xi~ eta_w.
void scenario1_adapt_deriv(const CompensatorParams& cp, const NonSprSignals& sig, int m,
                           double* dKh, double* dJh, double* dBh);

// Scenario 2 (position-only exchange): e = zbar - x, r_w = Jh Om2 + Bh Om1 + Kh zbar,
// u = C_w (r_w - Kh x); regressor channels (e, Om2, Om1) run through (s + Th)^{-1}.
void scenario2_control(const Network& net, const CompensatorParams& cp, const double* x,
                       const double* v, const double* o2, const double* o1, const double* cw,
                       const double* f1, const double* f2, const double* f3, const double* Kh,
                       const double* Jh, const double* Bh, const Leader3& L, double* u,
                       NonSprSignals& sig, double* do2, double* do1, double* dcw, double* df1,
                       double* df2, double* df3);

void scenario2_adapt_deriv(const CompensatorParams& cp, const NonSprSignals& sig,
                           const double* f1, const double* f2, const double* f3, int m,
                           double* dKh, double* dJh, double* dBh);

enum class NonSprMap { Unshaped, Scenario1Shaped, Scenario2Composite };

struct NonSprCert {
    Vec min_re;            // per-agent min over the grid
    int rel_degree = 0;
    double max_root_re = 0.0;  // worst closed-loop denominator root (Hurwitz iff < 0)
    bool verdict = false;
    std::string reason;
};

NonSprCert nonspr_certify(const PlantParams& p, const CompensatorParams& cp, NonSprMap which,
                          const Vec& omega);

}  // namespace passync
