#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "passync/engine.hpp"

using namespace passync;

namespace {

ScenarioConfig base_cfg(Topology top, int m, ControllerKind c) {
    ScenarioConfig cfg;
    cfg.topology.kind = top;
    cfg.topology.m = m;
    cfg.controller = c;
    return cfg;
}

}  // namespace

TEST_CASE("state layout partitions the flat vector exactly once") {
    for (auto kind :
         {ControllerKind::Spr, ControllerKind::NonSprS1, ControllerKind::NonSprS2}) {
        const int m = 5;
        auto layout = state_layout(kind, m);
        int expect = 0;
        for (auto& [name, off] : layout) {
            CHECK(off == expect);
            expect += m;
        }
        CHECK(expect == state_dim(kind, m));
    }
    CHECK(state_dim(ControllerKind::Spr, 8) == 40);
    CHECK(state_dim(ControllerKind::NonSprS1, 8) == 64);
    CHECK(state_dim(ControllerKind::NonSprS2, 8) == 88);
}

TEST_CASE("origin is an equilibrium: star m=1, zero leader, zero state") {
    ScenarioConfig cfg = base_cfg(Topology::Star, 1, ControllerKind::Spr);
    cfg.leader.kind = LeaderKind::Zero;
    cfg.integ.T = 2.0;
    RunResult res = simulate(cfg);
    CHECK_FALSE(res.blowup);
    for (const auto& row : res.x)
        for (double v : row) CHECK(v == 0.0);
    CHECK(res.steady_state_err == 0.0);
}

TEST_CASE("star m=8 SPR disturbance-free: tracks and V nonincreasing") {
    ScenarioConfig cfg = base_cfg(Topology::Star, 8, ControllerKind::Spr);
    cfg.monitor_lyapunov = true;
    RunResult res = simulate(cfg);
    CHECK_FALSE(res.blowup);
    CHECK(res.steady_state_err < 1e-2);
    CHECK(res.steady_state_err < 1e-5);  // pilot oracle: 1.46e-6
    CHECK(res.lyap_max_step_increase < 1e-8);
    CHECK(res.estimate_max < 100.0);
    CHECK_FALSE(res.lyap.empty());
    // V is globally nonincreasing on the decimated trace too
    for (size_t k = 1; k < res.lyap.size(); ++k)
        CHECK(res.lyap[k] <= res.lyap[k - 1] + 1e-8);
}

TEST_CASE("cyclic leader-weight sweep: w=0.05 at least 10x worse than w=0.5") {
    auto run = [](double w) {
        ScenarioConfig cfg = base_cfg(Topology::Cyclic, 8, ControllerKind::Spr);
        cfg.topology.leader_weight_override = w;
        return simulate(cfg).steady_state_err;
    };
    double weak = run(0.05), strong = run(0.5);
    CHECK(weak >= 10.0 * strong);
    CHECK(strong < 1e-2);
}

TEST_CASE("error-dynamics oracle below 1e-3 at dt=1e-4") {
    double worst = error_dynamics_oracle(100, 1e-4, 1);
    CHECK(worst < 1e-3);
    CHECK(worst < 1e-4);  // pilot: ~3.4e-6
}

TEST_CASE("RK4 order: halving dt scales the final-state change by ~16") {
    auto final_state = [](double dt) {
        ScenarioConfig cfg = base_cfg(Topology::Star, 2, ControllerKind::Spr);
        cfg.integ.dt = dt;
        cfg.integ.T = 5.0;
        cfg.integ.stride = 1;
        RunResult res = simulate(cfg);
        Vec s = res.x.back();
        for (double v : res.est.back()) s.push_back(v);
        return s;
    };
    Vec a = final_state(8e-3), b = final_state(4e-3), c = final_state(2e-3);
    double nab = 0.0, nbc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        nab += (a[i] - b[i]) * (a[i] - b[i]);
        nbc += (b[i] - c[i]) * (b[i] - c[i]);
    }
    double ratio = std::sqrt(nab) / std::sqrt(nbc);
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 32.0);
}

TEST_CASE("determinism: identical configs give identical trajectories") {
    ScenarioConfig cfg = base_cfg(Topology::Arbitrary, 8, ControllerKind::Spr);
    cfg.dist.kind = DisturbKind::D3;
    cfg.integ.T = 5.0;
    RunResult a = simulate(cfg), b = simulate(cfg);
    REQUIRE(a.t.size() == b.t.size());
    for (size_t k = 0; k < a.t.size(); ++k)
        for (size_t i = 0; i < a.x[k].size(); ++i) CHECK(a.x[k][i] == b.x[k][i]);
    CHECK(a.sync_l2 == b.sync_l2);
    CHECK(a.steady_state_err == b.steady_state_err);
}

TEST_CASE("blowup detector fires when the step size makes RK4 unstable") {
    ScenarioConfig cfg = base_cfg(Topology::Star, 8, ControllerKind::Spr);
    cfg.integ.dt = 1.0;  // far outside the RK4 stability region
    cfg.integ.stride = 1;
    RunResult res = simulate(cfg);
    CHECK(res.blowup);
    CHECK(res.blowup_time > 0.0);
    CHECK(res.blowup_time <= 30.0);
}

TEST_CASE("non-SPR scenarios on star under d3 meet the parity threshold") {
    for (auto kind : {ControllerKind::NonSprS1, ControllerKind::NonSprS2}) {
        ScenarioConfig cfg = base_cfg(Topology::Star, 8, kind);
        cfg.dist.kind = DisturbKind::D3;
        RunResult res = simulate(cfg);
        CHECK_FALSE(res.blowup);
        CHECK(res.steady_state_err < 5e-2);
        CHECK(res.estimate_max < 100.0);
    }
}

TEST_CASE("scenario 1 ideal-parameter tracking at m=1") {
    ScenarioConfig cfg = base_cfg(Topology::Star, 1, ControllerKind::NonSprS1);
    RunResult res = simulate(cfg);
    CHECK_FALSE(res.blowup);
    CHECK(res.steady_state_err < 1e-2);
}

TEST_CASE("invalid configs rejected") {
    ScenarioConfig cfg = base_cfg(Topology::Star, 8, ControllerKind::Spr);
    cfg.integ.dt = 0.0;
    CHECK_THROWS_AS(simulate(cfg), ConfigError);
    cfg = base_cfg(Topology::Star, 8, ControllerKind::Spr);
    SprGains g = paper_spr_gains(8);
    g.Phi[2] = 0.0;
    cfg.spr_gains = g;
    CHECK_THROWS_AS(simulate(cfg), ConfigError);
    cfg = base_cfg(Topology::Star, 0, ControllerKind::Spr);
    CHECK_THROWS_AS(simulate(cfg), ConfigError);
}

TEST_CASE("benchmark single cell: one nonnegative median") {
    BenchmarkOptions opt;
    opt.Tmax = 10.0;
    auto cells = benchmark({8}, {Topology::Star}, {ControllerKind::Spr}, 1, opt);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].rep_seconds.size() == 1);
    CHECK(cells[0].median_seconds >= 0.0);
    CHECK(cells[0].settle_seconds > 0.0);
    CHECK(cells[0].settle_seconds < 10.0);  // star settles quickly
}
