#include "passync/signals.hpp"

#include <cmath>

namespace passync {

Leader3 leader_eval(const LeaderSignal& sig, double t) {
    switch (sig.kind) {
        case LeaderKind::PaperSinusoid:
            return {std::sin(t) + 0.75 * std::cos(2.0 * t),
                    std::cos(t) - 1.5 * std::sin(2.0 * t),
                    -std::sin(t) - 3.0 * std::cos(2.0 * t)};
        case LeaderKind::Constant:
            return {sig.c, 0.0, 0.0};
        case LeaderKind::Zero:
            return {0.0, 0.0, 0.0};
        case LeaderKind::Custom: {
            Leader3 out;
            for (const SinTerm& s : sig.terms) {
                double sw = std::sin(s.w * t), cw = std::cos(s.w * t);
                out.x0 += s.a * sw + s.b * cw;
                out.dx0 += s.w * (s.a * cw - s.b * sw);
                out.ddx0 += s.w * s.w * (-s.a * sw - s.b * cw);
            }
            return out;
        }
    }
    return {};
}

double disturbance_scalar(const DisturbanceProfile& d, double t) {
    switch (d.kind) {
        case DisturbKind::None:
            return 0.0;
        case DisturbKind::D1:
            return 0.25;
        case DisturbKind::D2:
            return 0.45 * std::sin(2.0 * t);
        case DisturbKind::D3:
            return 0.7 * std::sin(2.0 * t) + 0.3 * std::cos(3.0 * t);
        case DisturbKind::Custom: {
            double v = d.c;
            for (const SinTerm& s : d.terms) v += s.a * std::sin(s.w * t) + s.b * std::cos(s.w * t);
            return v;
        }
    }
    return 0.0;
}

void disturbance_eval(const DisturbanceProfile& d, double t, int m, double* out) {
    double v = disturbance_scalar(d, t);
    for (int i = 0; i < m; ++i) out[i] = v * (d.scale.empty() ? 1.0 : d.scale[i]);
}

}  // namespace passync
