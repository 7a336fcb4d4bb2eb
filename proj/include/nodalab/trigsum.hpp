#pragma once

// Evaluation of real trigonometric sums
//     f(x) = sum_k  c_k cos(2*pi*<f_k, x>) + s_k sin(2*pi*<f_k, x>)
// at single points and on grids. Grid evaluation advances the phase along a
// row by one complex rotation per sample instead of calling sin/cos, and
// re-synchronises periodically to stop rounding drift; this is the profile
// bottleneck of every experiment, everything else rides on it.

#include <cmath>
#include <vector>

#include "nodalab/geometry.hpp"

namespace nodalab {

struct Wave {
    Vec2 freq;       // frequency vector; phase is 2*pi*<freq, x>
    double c = 0.0;  // cosine amplitude
    double s = 0.0;  // sine amplitude
};

inline double waves_value(const std::vector<Wave>& waves, Vec2 x) {
    double v = 0.0;
    for (const Wave& w : waves) {
        double phi = 2.0 * M_PI * w.freq.dot(x);
        v += w.c * std::cos(phi) + w.s * std::sin(phi);
    }
    return v;
}

inline Vec2 waves_gradient(const std::vector<Wave>& waves, Vec2 x) {
    Vec2 g{0.0, 0.0};
    for (const Wave& w : waves) {
        double phi = 2.0 * M_PI * w.freq.dot(x);
        double d = 2.0 * M_PI * (-w.c * std::sin(phi) + w.s * std::cos(phi));
        g.x += d * w.freq.x;
        g.y += d * w.freq.y;
    }
    return g;
}

// Accumulates the sum (and optionally its gradient) over a full grid.
inline void waves_accumulate_grid(const std::vector<Wave>& waves, const GridSpec& grid,
                                  std::vector<double>& values, std::vector<Vec2>* gradients) {
    constexpr int resync_every = 256;
    values.assign(grid.size(), 0.0);
    if (gradients) gradients->assign(grid.size(), Vec2{0.0, 0.0});

    for (const Wave& w : waves) {
        const double dphi = 2.0 * M_PI * w.freq.x * grid.spacing;
        const double cd = std::cos(dphi), sd = std::sin(dphi);
        const double gx = 2.0 * M_PI * w.freq.x, gy = 2.0 * M_PI * w.freq.y;
        for (int j = 0; j < grid.ny; ++j) {
            const Vec2 row0 = grid.point(0, j);
            double phi0 = 2.0 * M_PI * w.freq.dot(row0);
            double cs = std::cos(phi0), sn = std::sin(phi0);
            double* row = values.data() + grid.index(0, j);
            Vec2* grow = gradients ? gradients->data() + grid.index(0, j) : nullptr;
            for (int i = 0; i < grid.nx; ++i) {
                if (i > 0 && i % resync_every == 0) {
                    double phi = phi0 + i * dphi;
                    cs = std::cos(phi);
                    sn = std::sin(phi);
                }
                row[i] += w.c * cs + w.s * sn;
                if (grow) {
                    double d = -w.c * sn + w.s * cs;
                    grow[i].x += d * gx;
                    grow[i].y += d * gy;
                }
                double cs2 = cs * cd - sn * sd;
                sn = sn * cd + cs * sd;
                cs = cs2;
            }
        }
    }
}

inline SampledField sample_waves(const std::vector<Wave>& waves, const GridSpec& grid,
                                 bool want_gradients = false) {
    SampledField f;
    f.grid = grid;
    waves_accumulate_grid(waves, grid, f.values, want_gradients ? &f.gradients : nullptr);
    return f;
}

} // namespace nodalab
