#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "passync/graph.hpp"
#include "passync/nonspr.hpp"
#include "passync/plant.hpp"
#include "passync/signals.hpp"
#include "passync/spr.hpp"

namespace passync {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalBlowup : std::runtime_error {
    double t;
    explicit NumericalBlowup(double t)
        : std::runtime_error("NumericalBlowup at t=" + std::to_string(t)), t(t) {}
};

enum class ControllerKind { Spr, NonSprS1, NonSprS2 };

struct IntegratorConfig {
    double dt = 1e-3;
    double T = 30.0;
    int stride = 100;  // decimation for stored trajectories
};

struct ScenarioConfig {
    std::string name = "scenario";
    TopologyPreset topology;
    bool use_paper_params = true;
    Vec J, B;  // explicit plant parameters when !use_paper_params
    ControllerKind controller = ControllerKind::Spr;
    std::optional<SprGains> spr_gains;        // default: paper_spr_gains(m)
    std::optional<CompensatorParams> comp;    // default: default_compensator(m)
    LeaderSignal leader;
    DisturbanceProfile dist;
    IntegratorConfig integ;
    bool monitor_lyapunov = false;
    Vec x_init, v_init;  // empty = zeros; non-SPR K estimates start at Ks
};

void validate_config(const ScenarioConfig& cfg);

// Flat state layout: list of (block name, offset); blocks are length m each.
std::vector<std::pair<std::string, int>> state_layout(ControllerKind kind, int m);
int state_dim(ControllerKind kind, int m);

struct RunResult {
    Vec t;                       // decimated time grid
    std::vector<Vec> x, e, est;  // decimated trajectories (est = estimate block)
    double sync_l2 = 0.0;            // integral of ||e||_2^2 dt (trapezoid)
    double steady_state_err = 0.0;   // max over t in [0.9T, T] of ||e||_inf (every step)
    double estimate_final = 0.0;     // max |estimate| at T
    double estimate_max = 0.0;       // max |estimate| over the run
    Vec lyap;                        // decimated V_u trace (SPR monitor only)
    double lyap_max_step_increase = 0.0;
    double wall_clock_seconds = 0.0;
    bool blowup = false;
    double blowup_time = 0.0;
};

RunResult simulate(const ScenarioConfig& cfg);

// Harness-side SPR Lyapunov value from a raw stacked state (uses TRUE plant params).
double lyapunov_value(const Network& net, const PlantParams& p, const SprGains& g,
                      const double* S, double t, const LeaderSignal& leader);

// Worst relative mismatch between finite-difference d(theta)/dt and the closed form
// -(Phi/J) theta - (1/J)(J~ zeta + B~ v) - (1/J) delta over random samples (star, m=8).
double error_dynamics_oracle(int nsamples = 100, double dt = 1e-4, uint64_t seed = 1);

struct BenchmarkOptions {
    // 2e-3 sits outside the RK4 stability region for the largest non-SPR cells
    // (adapted K pushes the fast pole past |lambda h| ~ 2.8), so the benchmark
    // uses the same step as the simulation experiments.
    double dt = 1e-3;
    double eps = 0.05;   // settle threshold on ||e||_inf
    double hold = 1.0;   // seconds the threshold must hold
    double Tmax = 60.0;  // settle cap
    int warmup = 1;      // excluded runs per cell
};

struct BenchmarkCell {
    int m = 0;
    Topology topology = Topology::Star;
    ControllerKind controller = ControllerKind::Spr;
    double median_seconds = 0.0;
    double settle_seconds = 0.0;
    Vec rep_seconds;
};

std::vector<BenchmarkCell> benchmark(const std::vector<int>& ms,
                                     const std::vector<Topology>& topologies,
                                     const std::vector<ControllerKind>& controllers, int reps,
                                     const BenchmarkOptions& opt = {});

std::string topology_name(Topology k);
std::string controller_name(ControllerKind k);

}  // namespace passync
