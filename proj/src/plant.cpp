#include "passync/plant.hpp"

#include <cmath>
#include <stdexcept>

namespace passync {

PlantParams paper_params(int m) {
    PlantParams p;
    p.J.resize(m);
    p.B.resize(m);
    for (int i = 1; i <= m; ++i) {
        p.J[i - 1] = 0.5 + 0.1 * i;
        p.B[i - 1] = -1.3 - 0.1 * i;
    }
    return p;
}

void plant_deriv(const PlantParams& p, const double* v, const double* u, const double* delta,
                 int m, double* dx_out, double* dv_out) {
    for (int i = 0; i < m; ++i) {
        if (!std::isfinite(v[i]) || !std::isfinite(u[i]))
            throw std::runtime_error("NonFiniteInput");
        dx_out[i] = v[i];
        dv_out[i] = (u[i] + delta[i] - p.B[i] * v[i]) / p.J[i];
    }
}

}  // namespace passync
