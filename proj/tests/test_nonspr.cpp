#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "passync/nonspr.hpp"

using namespace passync;

TEST_CASE("lead filter realization") {
    SUBCASE("p = q degenerates to a pure gain") {
        LeadOut lo = lead_filter_step_deriv(0.37, 1.5, 3.0, 3.0, 2.0);
        CHECK(lo.out == doctest::Approx(3.0));
    }
    SUBCASE("DC gain is phi p / q") {
        // settled state for constant input w: state = w / q
        const double w = 0.8, p = 1.0, q = 10.0, phi = 2.0;
        LeadOut lo = lead_filter_step_deriv(w / q, w, p, q, phi);
        CHECK(lo.dstate == doctest::Approx(0.0));
        CHECK(lo.out == doctest::Approx(phi * p / q * w));
    }
    SUBCASE("step response matches closed form at 64 sample times") {
        // phi (s+p)/(s+q) driven by unit step: y(t) = phi p/q + phi (q-p)/q e^{-qt}
        const double p = 1.0, q = 10.0, phi = 3.0, dt = 1e-5;
        double state = 0.0, t = 0.0;
        int checks = 0;
        for (long k = 0; k < 200000 && checks < 64; ++k) {
            // RK4 on the scalar filter
            auto f = [&](double s) { return lead_filter_step_deriv(s, 1.0, p, q, phi).dstate; };
            double k1 = f(state), k2 = f(state + 0.5 * dt * k1), k3 = f(state + 0.5 * dt * k2),
                   k4 = f(state + dt * k3);
            state += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
            t += dt;
            if (k % 3000 == 0) {
                double expect = phi * (p / q + (q - p) / q * std::exp(-q * t));
                CHECK(lead_filter_step_deriv(state, 1.0, p, q, phi).out ==
                      doctest::Approx(expect).epsilon(1e-6));
                ++checks;
            }
        }
        CHECK(checks == 64);
    }
    SUBCASE("C_w then C_w^{-1} recovers a band-limited signal within 1%") {
        const double p = 1.0, q = 10.0, phi = 2.0, dt = 1e-4;
        double s1 = 0.0, s2 = 0.0, t = 0.0;
        double worst = 0.0;
        for (long k = 0; k < 200000; ++k) {  // 20 s horizon
            auto f = [&](double a, double b) {
                LeadOut fwd = lead_filter_step_deriv(a, std::sin(t), p, q, phi);
                LeadOut inv = lead_filter_step_deriv(b, fwd.out, q, p, 1.0 / phi);
                return std::pair{fwd.dstate, inv.dstate};
            };
            auto [k1a, k1b] = f(s1, s2);
            auto [k2a, k2b] = f(s1 + 0.5 * dt * k1a, s2 + 0.5 * dt * k1b);
            auto [k3a, k3b] = f(s1 + 0.5 * dt * k2a, s2 + 0.5 * dt * k2b);
            auto [k4a, k4b] = f(s1 + dt * k3a, s2 + dt * k3b);
            s1 += dt / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a);
            s2 += dt / 6.0 * (k1b + 2 * k2b + 2 * k3b + k4b);
            t += dt;
            if (t > 10.0) {
                LeadOut fwd = lead_filter_step_deriv(s1, std::sin(t), p, q, phi);
                LeadOut inv = lead_filter_step_deriv(s2, fwd.out, q, p, 1.0 / phi);
                worst = std::max(worst, std::abs(inv.out - std::sin(t)));
            }
        }
        CHECK(worst < 0.01);
    }
}

TEST_CASE("default compensator validates and is frozen-certified") {
    CompensatorParams cp = default_compensator(8);
    CHECK_NOTHROW(validate(cp));
    CHECK(cp.Phi[0] == doctest::Approx(29.0));
    CHECK(cp.th0 == 2.0);
    PlantParams p = paper_params(8);
    Vec grid(400);
    for (int k = 0; k < 400; ++k) grid[k] = std::pow(10.0, -3.0 + 6.0 * k / 399.0);

    NonSprCert s1 = nonspr_certify(p, cp, NonSprMap::Scenario1Shaped, grid);
    CHECK(s1.verdict);
    CHECK(s1.rel_degree == 1);
    CHECK(s1.max_root_re < 0.0);
    double mn = 1e300;
    for (double v : s1.min_re) mn = std::min(mn, v);
    CHECK(mn == doctest::Approx(9.37e-3).epsilon(0.05));

    NonSprCert s2 = nonspr_certify(p, cp, NonSprMap::Scenario2Composite, grid);
    CHECK(s2.verdict);
    mn = 1e300;
    for (double v : s2.min_re) mn = std::min(mn, v);
    CHECK(mn == doctest::Approx(2.26e-4).epsilon(0.05));

    NonSprCert un = nonspr_certify(p, cp, NonSprMap::Unshaped, grid);
    CHECK_FALSE(un.verdict);
    CHECK(un.rel_degree == 2);
    CHECK(un.reason == "relative degree 2");
}

TEST_CASE("certification holds at m=250") {
    PlantParams p = paper_params(250);
    CompensatorParams cp = default_compensator(250);
    Vec grid(400);
    for (int k = 0; k < 400; ++k) grid[k] = std::pow(10.0, -3.0 + 6.0 * k / 399.0);
    CHECK(nonspr_certify(p, cp, NonSprMap::Scenario1Shaped, grid).verdict);
    CHECK(nonspr_certify(p, cp, NonSprMap::Scenario2Composite, grid).verdict);
}

TEST_CASE("invalid compensators rejected") {
    CompensatorParams cp = default_compensator(2);
    cp.Th[1] = 0.0;
    CHECK_THROWS(validate(cp));
    cp = default_compensator(2);
    cp.p[0] = cp.q[0];  // not phase lead
    CHECK_THROWS(validate(cp));
}

TEST_CASE("scenario 1 signals: zero network reduces e_y to -y") {
    const int m = 2;
    Network net = make_network(m, {{1, 0, 1.0}, {2, 0, 1.0}});
    // strip the leader links to emulate A_m = A_0 = 0
    Network zero = make_network(m, {});
    CompensatorParams cp = default_compensator(m);
    Vec x{0.3, -0.2}, v{0.1, 0.4}, o2(m, 0.0), o1(m, 0.0), cw(m, 0.0);
    Vec Kh = cp.Ks, Jh(m, 0.0), Bh(m, 0.0), u(m);
    Vec do2(m), do1(m), dcw(m);
    NonSprSignals sig;
    scenario1_control(zero, cp, x.data(), v.data(), o2.data(), o1.data(), cw.data(), Kh.data(),
                      Jh.data(), Bh.data(), {0.75, 1.0, -3.0}, u.data(), sig, do2.data(),
                      do1.data(), dcw.data());
    for (int i = 0; i < m; ++i)
        CHECK(sig.ebar[i] == doctest::Approx(-(v[i] + cp.Th[i] * x[i])).epsilon(1e-12));
}

TEST_CASE("scenario adaptation arithmetic") {
    CompensatorParams cp = default_compensator(1);
    cp.G2 = {5.0};
    NonSprSignals sig;
    sig.ebar = {1.0};
    sig.Om2 = {-0.5};
    sig.Om1 = {0.2};
    double dKh, dJh, dBh;
    scenario1_adapt_deriv(cp, sig, 1, &dKh, &dJh, &dBh);
    CHECK(dJh == doctest::Approx(-2.5));  // gradient descends e_y = -W Xi~ eta
    CHECK(dKh == doctest::Approx(cp.G1[0] * 1.0));
    sig.ebar = {0.0};
    scenario1_adapt_deriv(cp, sig, 1, &dKh, &dJh, &dBh);
    CHECK(dKh == 0.0);
    CHECK(dJh == 0.0);
    CHECK(dBh == 0.0);

    double f1 = 0.7, f2 = -0.1, f3 = 0.0;
    sig.ebar = {0.2};
    cp.G1 = {5.0};
    scenario2_adapt_deriv(cp, sig, &f1, &f2, &f3, 1, &dKh, &dJh, &dBh);
    CHECK(dKh == doctest::Approx(5.0 * 0.2 * 0.7));
    CHECK(dBh == 0.0);
}

TEST_CASE("scenario 2 pre-filter: step DC gain 1/Th and disconnected reduction") {
    const int m = 1;
    Network zero = make_network(m, {});
    CompensatorParams cp = default_compensator(m);
    Vec x{0.4}, v{0.0}, o2(m, 0.0), o1(m, 0.0), cw(m, 0.0), f1(m, 0.0), f2(m, 0.0), f3(m, 0.0);
    Vec Kh = cp.Ks, Jh(m, 0.0), Bh(m, 0.0), u(m);
    Vec do2(m), do1(m), dcw(m), df1(m), df2(m), df3(m);
    NonSprSignals sig;
    scenario2_control(zero, cp, x.data(), v.data(), o2.data(), o1.data(), cw.data(), f1.data(),
                      f2.data(), f3.data(), Kh.data(), Jh.data(), Bh.data(), {0.75, 1.0, -3.0},
                      u.data(), sig, do2.data(), do1.data(), dcw.data(), df1.data(), df2.data(),
                      df3.data());
    CHECK(sig.ebar[0] == doctest::Approx(-0.4));   // e = -x when disconnected
    CHECK(df1[0] == doctest::Approx(-0.4));        // filter state 0: df = input
    // settled pre-filter on constant input w: f = w / Th
    f1[0] = sig.ebar[0] / cp.Th[0];
    scenario2_control(zero, cp, x.data(), v.data(), o2.data(), o1.data(), cw.data(), f1.data(),
                      f2.data(), f3.data(), Kh.data(), Jh.data(), Bh.data(), {0.75, 1.0, -3.0},
                      u.data(), sig, do2.data(), do1.data(), dcw.data(), df1.data(), df2.data(),
                      df3.data());
    CHECK(df1[0] == doctest::Approx(0.0).epsilon(1e-12));
}
