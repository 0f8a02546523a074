#pragma once
#include "passync/graph.hpp"
#include "passync/plant.hpp"
#include "passync/signals.hpp"

namespace passync {

struct SprGains {
    Vec Phi, Lam, G1, G2;  // all entries > 0
};

SprGains paper_spr_gains(int m);  // phi_i = 1.5 + 0.5 i, lambda = 1, Gamma = 5

// Per-step derived quantities (scratch, resized by spr_control).
struct SprSignals {
    Vec zbar, ebar, debar, zeta, theta;
};

// u = Phi.theta + Jh.zeta + Bh.v with
//   zbar = A_m x + A_0 x0,  ebar = zbar - x,  debar = A_m v + A_0 dx0 - v,
//   zeta = ddx0 + 2 Lam.debar + Lam^2.ebar,  theta = debar + 2 Lam.ebar + Lam^2.ie.
void spr_control(const Network& net, const SprGains& g, const double* x, const double* v,
                 const double* ie, const double* Jh, const double* Bh, const Leader3& L,
                 double* u, SprSignals& sig);

// dJh = G1.theta.zeta, dBh = G2.theta.v (integral state derivative is ebar).
void spr_adapt_deriv(const SprGains& g, const SprSignals& sig, const double* v, int m,
                     double* dJh, double* dBh);

struct RhReport {
    Vec margin;  // 2(b_i + phi_i) - J_i lambda_i, pass iff > 0
    bool all_pass = false;
};
RhReport rh_gain_check(const PlantParams& p, const SprGains& g);

Vec default_omega_grid(int points = 400, double lo = 1e-3, double hi = 1e3);

struct FreqReport {
    Vec min_re;  // per-agent min over grid of Re W_u(jw)
    bool verdict = false;
};
// W_u,i(jw) = phi (jw + lam)^2 / (J (jw)^3 + (b + phi)(jw)^2 + 2 phi lam (jw) + phi lam^2);
// verdict requires rh_gain_check to pass and min Re > 0 on the grid.
FreqReport spr_certify_frequency(const PlantParams& p, const SprGains& g, const Vec& omega);

}  // namespace passync
