#include "passync/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

namespace passync {

namespace {
constexpr double kBlowup = 1e9;
}

void validate_config(const ScenarioConfig& cfg) {
    if (cfg.topology.m < 1) throw ConfigError("m must be >= 1");
    if (!(cfg.integ.dt > 0.0)) throw ConfigError("dt must be > 0");
    if (!(cfg.integ.T >= cfg.integ.dt)) throw ConfigError("T must be >= dt");
    if (cfg.integ.stride < 1) throw ConfigError("stride must be >= 1");
    const int m = cfg.topology.m;
    if (!cfg.use_paper_params) {
        if (static_cast<int>(cfg.J.size()) != m || static_cast<int>(cfg.B.size()) != m)
            throw ConfigError("explicit J, B must have length m");
        for (double j : cfg.J)
            if (!(j > 0.0)) throw ConfigError("J entries must be positive");
    }
    if (cfg.spr_gains) {
        const SprGains& g = *cfg.spr_gains;
        if (static_cast<int>(g.Phi.size()) != m || static_cast<int>(g.Lam.size()) != m ||
            static_cast<int>(g.G1.size()) != m || static_cast<int>(g.G2.size()) != m)
            throw ConfigError("SPR gain vectors must have length m");
        for (int i = 0; i < m; ++i)
            if (!(g.Phi[i] > 0 && g.Lam[i] > 0 && g.G1[i] > 0 && g.G2[i] > 0))
                throw ConfigError("SPR gains must be positive");
    }
    if (cfg.comp) {
        if (static_cast<int>(cfg.comp->Phi.size()) != m)
            throw ConfigError("compensator vectors must have length m");
        try {
            validate(*cfg.comp);
        } catch (const std::exception& ex) {
            throw ConfigError(ex.what());
        }
    }
    if (!cfg.x_init.empty() && static_cast<int>(cfg.x_init.size()) != m)
        throw ConfigError("x_init must have length m");
    if (!cfg.v_init.empty() && static_cast<int>(cfg.v_init.size()) != m)
        throw ConfigError("v_init must have length m");
    if (!cfg.dist.scale.empty() && static_cast<int>(cfg.dist.scale.size()) != m)
        throw ConfigError("disturbance scale must have length m");
}

std::vector<std::pair<std::string, int>> state_layout(ControllerKind kind, int m) {
    std::vector<std::string> blocks;
    switch (kind) {
        case ControllerKind::Spr:
            blocks = {"x", "v", "ie", "Jh", "Bh"};
            break;
        case ControllerKind::NonSprS1:
            blocks = {"x", "v", "o2", "o1", "cw", "Kh", "Jh", "Bh"};
            break;
        case ControllerKind::NonSprS2:
            blocks = {"x", "v", "o2", "o1", "cw", "f1", "f2", "f3", "Kh", "Jh", "Bh"};
            break;
    }
    std::vector<std::pair<std::string, int>> layout;
    int off = 0;
    for (auto& b : blocks) {
        layout.emplace_back(b, off);
        off += m;
    }
    return layout;
}

int state_dim(ControllerKind kind, int m) {
    switch (kind) {
        case ControllerKind::Spr:
            return 5 * m;
        case ControllerKind::NonSprS1:
            return 8 * m;
        case ControllerKind::NonSprS2:
            return 11 * m;
    }
    return 0;
}

std::string topology_name(Topology k) {
    switch (k) {
        case Topology::Star:
            return "star";
        case Topology::Cyclic:
            return "cyclic";
        case Topology::Series:
            return "path";
        case Topology::Arbitrary:
            return "arbitrary";
        case Topology::Custom:
            return "custom";
    }
    return "?";
}

std::string controller_name(ControllerKind k) {
    switch (k) {
        case ControllerKind::Spr:
            return "spr";
        case ControllerKind::NonSprS1:
            return "nonspr-s1";
        case ControllerKind::NonSprS2:
            return "nonspr-s2";
    }
    return "?";
}

namespace {

// Resolved closed-loop system: vector field of the stacked state.
class Sim {
  public:
    explicit Sim(const ScenarioConfig& cfg)
        : kind(cfg.controller),
          net(build_scenario_network(cfg.topology)),
          pp(cfg.use_paper_params ? paper_params(cfg.topology.m)
                                  : PlantParams{cfg.J, cfg.B}),
          sg(cfg.spr_gains ? *cfg.spr_gains : paper_spr_gains(cfg.topology.m)),
          cp(cfg.comp ? *cfg.comp : default_compensator(cfg.topology.m)),
          leader(cfg.leader),
          dist(cfg.dist),
          m(cfg.topology.m) {
        u.resize(m);
        delta.resize(m);
        ebuf.resize(m);
        ybuf.resize(m);
    }

    int dim() const { return state_dim(kind, m); }

    void init_state(const ScenarioConfig& cfg, Vec& S) const {
        S.assign(dim(), 0.0);
        for (size_t i = 0; i < cfg.x_init.size(); ++i) S[i] = cfg.x_init[i];
        for (size_t i = 0; i < cfg.v_init.size(); ++i) S[m + i] = cfg.v_init[i];
        if (kind != ControllerKind::Spr) {
            // K estimates start at the certified nominal
            const int koff = (kind == ControllerKind::NonSprS1) ? 5 * m : 8 * m;
            for (int i = 0; i < m; ++i) S[koff + i] = cp.Ks[i];
        }
    }

    void deriv(double t, const double* S, double* dS) {
        const Leader3 L = leader_eval(leader, t);
        disturbance_eval(dist, t, m, delta.data());
        const double* x = S;
        const double* v = S + m;
        switch (kind) {
            case ControllerKind::Spr: {
                spr_control(net, sg, x, v, S + 2 * m, S + 3 * m, S + 4 * m, L, u.data(), ssig);
                plant_deriv(pp, v, u.data(), delta.data(), m, dS, dS + m);
                for (int i = 0; i < m; ++i) dS[2 * m + i] = ssig.ebar[i];
                spr_adapt_deriv(sg, ssig, v, m, dS + 3 * m, dS + 4 * m);
                break;
            }
            case ControllerKind::NonSprS1: {
                scenario1_control(net, cp, x, v, S + 2 * m, S + 3 * m, S + 4 * m, S + 5 * m,
                                  S + 6 * m, S + 7 * m, L, u.data(), nsig, dS + 2 * m,
                                  dS + 3 * m, dS + 4 * m);
                plant_deriv(pp, v, u.data(), delta.data(), m, dS, dS + m);
                scenario1_adapt_deriv(cp, nsig, m, dS + 5 * m, dS + 6 * m, dS + 7 * m);
                break;
            }
            case ControllerKind::NonSprS2: {
                scenario2_control(net, cp, x, v, S + 2 * m, S + 3 * m, S + 4 * m, S + 5 * m,
                                  S + 6 * m, S + 7 * m, S + 8 * m, S + 9 * m, S + 10 * m, L,
                                  u.data(), nsig, dS + 2 * m, dS + 3 * m, dS + 4 * m,
                                  dS + 5 * m, dS + 6 * m, dS + 7 * m);
                plant_deriv(pp, v, u.data(), delta.data(), m, dS, dS + m);
                scenario2_adapt_deriv(cp, nsig, S + 5 * m, S + 6 * m, S + 7 * m, m, dS + 8 * m,
                                      dS + 9 * m, dS + 10 * m);
                break;
            }
        }
    }

    // Consensus error driving the metrics: ebar for SPR / Scenario 2, shaped e_y for Scenario 1.
    void error(double t, const double* S, double* e) {
        const Leader3 L = leader_eval(leader, t);
        const double* x = S;
        const double* v = S + m;
        if (kind == ControllerKind::NonSprS1) {
            const double y0 = L.dx0 + cp.th0 * L.x0;
            for (int i = 0; i < m; ++i) ybuf[i] = v[i] + cp.Th[i] * x[i];
            net.amul(ybuf.data(), e);
            for (int i = 0; i < m; ++i) e[i] += net.a0[i] * y0 - ybuf[i];
        } else {
            net.amul(x, e);
            for (int i = 0; i < m; ++i) e[i] += net.a0[i] * L.x0 - x[i];
        }
    }

    double lyapunov(double t, const double* S) {
        const Leader3 L = leader_eval(leader, t);
        const double* x = S;
        const double* v = S + m;
        const double* ie = S + 2 * m;
        const double* Jh = S + 3 * m;
        const double* Bh = S + 4 * m;
        net.amul(x, ebuf.data());
        net.amul(v, ybuf.data());
        double V = 0.0;
        for (int i = 0; i < m; ++i) {
            const double e = ebuf[i] + net.a0[i] * L.x0 - x[i];
            const double de = ybuf[i] + net.a0[i] * L.dx0 - v[i];
            const double lam = sg.Lam[i];
            const double th = de + 2.0 * lam * e + lam * lam * ie[i];
            const double Jt = Jh[i] - pp.J[i];
            const double Bt = Bh[i] - pp.B[i];
            V += th * th + Jt * Jt / (sg.G1[i] * pp.J[i]) + Bt * Bt / (sg.G2[i] * pp.J[i]);
        }
        return V;
    }

    int estimate_offset() const {
        switch (kind) {
            case ControllerKind::Spr:
                return 3 * m;
            case ControllerKind::NonSprS1:
                return 5 * m;
            case ControllerKind::NonSprS2:
                return 8 * m;
        }
        return 0;
    }
    int estimate_len() const { return (kind == ControllerKind::Spr) ? 2 * m : 3 * m; }

    ControllerKind kind;
    Network net;
    PlantParams pp;
    SprGains sg;
    CompensatorParams cp;
    LeaderSignal leader;
    DisturbanceProfile dist;
    int m;

  private:
    Vec u, delta, ebuf, ybuf;
    SprSignals ssig;
    NonSprSignals nsig;
};

class Rk4 {
  public:
    explicit Rk4(int n) : k1(n), k2(n), k3(n), k4(n), tmp(n), n(n) {}
    void step(Sim& sim, double t, double dt, Vec& S) {
        sim.deriv(t, S.data(), k1.data());
        for (int i = 0; i < n; ++i) tmp[i] = S[i] + 0.5 * dt * k1[i];
        sim.deriv(t + 0.5 * dt, tmp.data(), k2.data());
        for (int i = 0; i < n; ++i) tmp[i] = S[i] + 0.5 * dt * k2[i];
        sim.deriv(t + 0.5 * dt, tmp.data(), k3.data());
        for (int i = 0; i < n; ++i) tmp[i] = S[i] + dt * k3[i];
        sim.deriv(t + dt, tmp.data(), k4.data());
        for (int i = 0; i < n; ++i)
            S[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

  private:
    Vec k1, k2, k3, k4, tmp;
    int n;
};

bool state_ok(const Vec& S) {
    for (double v : S)
        if (!std::isfinite(v) || std::abs(v) > kBlowup) return false;
    return true;
}

}  // namespace

RunResult simulate(const ScenarioConfig& cfg) {
    validate_config(cfg);
    Sim sim(cfg);
    const int m = sim.m;
    const int n = sim.dim();
    Vec S;
    sim.init_state(cfg, S);
    Rk4 rk(n);
    const double dt = cfg.integ.dt;
    const long nsteps = std::lround(cfg.integ.T / dt);
    const double t_window = 0.9 * cfg.integ.T - 1e-12;

    RunResult res;
    Vec err(m);
    double prev_e2 = 0.0, prev_V = 0.0;
    bool have_prev_V = false;

    auto record = [&](double t, const Vec& state) {
        res.t.push_back(t);
        res.x.emplace_back(state.begin(), state.begin() + m);
        sim.error(t, state.data(), err.data());
        res.e.emplace_back(err);
        res.est.emplace_back(state.begin() + sim.estimate_offset(),
                             state.begin() + sim.estimate_offset() + sim.estimate_len());
        if (cfg.monitor_lyapunov && sim.kind == ControllerKind::Spr)
            res.lyap.push_back(sim.lyapunov(t, state.data()));
    };

    const auto t_start = std::chrono::steady_clock::now();
    record(0.0, S);
    sim.error(0.0, S.data(), err.data());
    for (int i = 0; i < m; ++i) prev_e2 += err[i] * err[i];
    if (cfg.monitor_lyapunov && sim.kind == ControllerKind::Spr) {
        prev_V = sim.lyapunov(0.0, S.data());
        have_prev_V = true;
    }

    double t = 0.0;
    for (long k = 0; k < nsteps; ++k) {
        rk.step(sim, t, dt, S);
        t = (k + 1) * dt;
        if (!state_ok(S)) {
            res.blowup = true;
            res.blowup_time = t;
            break;
        }
        sim.error(t, S.data(), err.data());
        double e2 = 0.0, einf = 0.0;
        for (int i = 0; i < m; ++i) {
            e2 += err[i] * err[i];
            einf = std::max(einf, std::abs(err[i]));
        }
        res.sync_l2 += 0.5 * dt * (prev_e2 + e2);
        prev_e2 = e2;
        if (k * dt >= t_window) res.steady_state_err = std::max(res.steady_state_err, einf);
        const double* est = S.data() + sim.estimate_offset();
        for (int i = 0; i < sim.estimate_len(); ++i)
            res.estimate_max = std::max(res.estimate_max, std::abs(est[i]));
        if (cfg.monitor_lyapunov && sim.kind == ControllerKind::Spr) {
            double V = sim.lyapunov(t, S.data());
            if (have_prev_V)
                res.lyap_max_step_increase = std::max(res.lyap_max_step_increase, V - prev_V);
            prev_V = V;
            have_prev_V = true;
        }
        if ((k + 1) % cfg.integ.stride == 0 || k + 1 == nsteps) record(t, S);
    }
    if (!res.blowup) {
        const double* est = S.data() + sim.estimate_offset();
        for (int i = 0; i < sim.estimate_len(); ++i)
            res.estimate_final = std::max(res.estimate_final, std::abs(est[i]));
    }
    res.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

double lyapunov_value(const Network& net, const PlantParams& p, const SprGains& g,
                      const double* S, double t, const LeaderSignal& leader) {
    const int m = net.m;
    Vec e(m), de(m);
    net.amul(S, e.data());
    net.amul(S + m, de.data());
    Leader3 L = leader_eval(leader, t);
    double V = 0.0;
    for (int i = 0; i < m; ++i) {
        double eb = e[i] + net.a0[i] * L.x0 - S[i];
        double deb = de[i] + net.a0[i] * L.dx0 - S[m + i];
        double lam = g.Lam[i];
        double th = deb + 2.0 * lam * eb + lam * lam * S[2 * m + i];
        double Jt = S[3 * m + i] - p.J[i];
        double Bt = S[4 * m + i] - p.B[i];
        V += th * th + Jt * Jt / (g.G1[i] * p.J[i]) + Bt * Bt / (g.G2[i] * p.J[i]);
    }
    return V;
}

double error_dynamics_oracle(int nsamples, double dt, uint64_t seed) {
    const int m = 8;
    ScenarioConfig cfg;
    cfg.topology.kind = Topology::Star;
    cfg.topology.m = m;
    cfg.dist.kind = DisturbKind::Custom;  // constant per-sample disturbance
    const SprGains g = paper_spr_gains(m);
    const PlantParams pp = paper_params(m);
    const Network net = build_scenario_network(cfg.topology);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u11(-1.0, 1.0), u010(0.0, 10.0);

    auto theta_of = [&](double t, const Vec& S, Vec& th) {
        Vec z(m), dz(m);
        net.amul(S.data(), z.data());
        net.amul(S.data() + m, dz.data());
        Leader3 L = leader_eval(cfg.leader, t);
        for (int i = 0; i < m; ++i) {
            double e = z[i] + net.a0[i] * L.x0 - S[i];
            double de = dz[i] + net.a0[i] * L.dx0 - S[m + i];
            th[i] = de + 2.0 * e + S[2 * m + i];  // lambda = 1
        }
    };

    double worst = 0.0;
    for (int s = 0; s < nsamples; ++s) {
        Vec S(5 * m);
        for (auto& v : S) v = u11(rng);
        const double d = u11(rng);
        const double t0 = u010(rng);
        cfg.dist.c = d;
        cfg.dist.terms.clear();
        Sim sim(cfg);
        Rk4 rk(5 * m);
        Vec Sp = S, Sm = S;
        rk.step(sim, t0, dt, Sp);
        rk.step(sim, t0, -dt, Sm);
        Vec thp(m), thm(m), th(m);
        theta_of(t0 + dt, Sp, thp);
        theta_of(t0 - dt, Sm, thm);
        theta_of(t0, S, th);
        // closed form at t0
        Vec z(m), dz(m);
        net.amul(S.data(), z.data());
        net.amul(S.data() + m, dz.data());
        Leader3 L = leader_eval(cfg.leader, t0);
        double maxdiff = 0.0, maxcf = 1.0;
        for (int i = 0; i < m; ++i) {
            double e = z[i] + net.a0[i] * L.x0 - S[i];
            double de = dz[i] + net.a0[i] * L.dx0 - S[m + i];
            double zeta = L.ddx0 + 2.0 * de + e;
            double v = S[m + i];
            double Jt = S[3 * m + i] - pp.J[i];
            double Bt = S[4 * m + i] - pp.B[i];
            double cf = -(g.Phi[i] / pp.J[i]) * th[i] - (Jt * zeta + Bt * v) / pp.J[i] -
                        d / pp.J[i];
            double fd = (thp[i] - thm[i]) / (2.0 * dt);
            maxdiff = std::max(maxdiff, std::abs(fd - cf));
            maxcf = std::max(maxcf, std::abs(cf));
        }
        worst = std::max(worst, maxdiff / maxcf);
    }
    return worst;
}

namespace {

// Run to settle: integrate until ||e||_inf stays below eps for `hold` seconds (capped).
double settle_run(const ScenarioConfig& cfg, const BenchmarkOptions& opt, double* wall_out) {
    Sim sim(cfg);
    const int m = sim.m;
    Vec S;
    sim.init_state(cfg, S);
    Rk4 rk(sim.dim());
    Vec err(m);
    const long nmax = std::lround(opt.Tmax / opt.dt);
    double ok_since = -1.0, t = 0.0, settle = opt.Tmax;
    const auto t_start = std::chrono::steady_clock::now();
    for (long k = 0; k < nmax; ++k) {
        rk.step(sim, t, opt.dt, S);
        t = (k + 1) * opt.dt;
        if (!state_ok(S)) throw NumericalBlowup(t);
        sim.error(t, S.data(), err.data());
        double einf = 0.0;
        for (int i = 0; i < m; ++i) einf = std::max(einf, std::abs(err[i]));
        if (einf < opt.eps) {
            if (ok_since < 0.0) ok_since = t;
            if (t - ok_since >= opt.hold) {
                settle = t;
                break;
            }
        } else {
            ok_since = -1.0;
        }
    }
    if (wall_out)
        *wall_out =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return settle;
}

}  // namespace

std::vector<BenchmarkCell> benchmark(const std::vector<int>& ms,
                                     const std::vector<Topology>& topologies,
                                     const std::vector<ControllerKind>& controllers, int reps,
                                     const BenchmarkOptions& opt) {
    std::vector<BenchmarkCell> cells;
    for (ControllerKind c : controllers)
        for (Topology top : topologies)
            for (int m : ms) {
                ScenarioConfig cfg;
                cfg.topology.kind = top;
                cfg.topology.m = m;
                cfg.controller = c;
                cfg.integ.dt = opt.dt;
                BenchmarkCell cell;
                cell.m = m;
                cell.topology = top;
                cell.controller = c;
                for (int r = 0; r < opt.warmup; ++r) settle_run(cfg, opt, nullptr);
                for (int r = 0; r < reps; ++r) {
                    double wall = 0.0;
                    cell.settle_seconds = settle_run(cfg, opt, &wall);
                    cell.rep_seconds.push_back(wall);
                }
                Vec sorted = cell.rep_seconds;
                std::sort(sorted.begin(), sorted.end());
                const size_t n = sorted.size();
                cell.median_seconds =
                    (n % 2) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
                cells.push_back(cell);
            }
    return cells;
}

}  // namespace passync
