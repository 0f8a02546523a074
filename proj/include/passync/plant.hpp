#pragma once
#include "passync/linalg.hpp"

namespace passync {

// Heterogeneous second-order followers J x'' + B x' = u + delta.
struct PlantParams {
    Vec J;  // inertias, all > 0
    Vec B;  // dampings, may be negative (open-loop unstable)
};

PlantParams paper_params(int m);  // J_i = 0.5 + 0.1 i, b_i = -1.3 - 0.1 i

// dx = v, dv = (u + delta - B v) / J, elementwise.
void plant_deriv(const PlantParams& p, const double* v, const double* u, const double* delta,
                 int m, double* dx_out, double* dv_out);

}  // namespace passync
