#pragma once
#include <vector>

#include "passync/linalg.hpp"

namespace passync {

// One sinusoid term a*sin(w t) + b*cos(w t).
struct SinTerm {
    double a = 0.0;
    double b = 0.0;
    double w = 1.0;
};

enum class LeaderKind { PaperSinusoid, Constant, Zero, Custom };

struct LeaderSignal {
    LeaderKind kind = LeaderKind::PaperSinusoid;
    double c = 0.0;                // Constant
    std::vector<SinTerm> terms;    // Custom
};

struct Leader3 {
    double x0 = 0.0, dx0 = 0.0, ddx0 = 0.0;
};

Leader3 leader_eval(const LeaderSignal& sig, double t);

enum class DisturbKind { None, D1, D2, D3, Custom };

struct DisturbanceProfile {
    DisturbKind kind = DisturbKind::None;
    double c = 0.0;                // Custom constant part
    std::vector<SinTerm> terms;    // Custom
    Vec scale;                     // per-agent scaling, empty = all ones
};

double disturbance_scalar(const DisturbanceProfile& d, double t);
void disturbance_eval(const DisturbanceProfile& d, double t, int m, double* out);

}  // namespace passync
