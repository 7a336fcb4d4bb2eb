#pragma once

// Probability measures on the unit circle and the stationary Gaussian fields
// they drive. Fields are realised as finite random trigonometric sums over
// antipodal-pair representatives with unit-radius frequencies; all randomness
// comes from counter-based streams so a (seed, realization index) pair pins
// the field exactly.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "nodalab/bessel.hpp"
#include "nodalab/geometry.hpp"
#include "nodalab/rng.hpp"
#include "nodalab/trigsum.hpp"

namespace nodalab {

struct SpectralAtom {
    double angle = 0.0;  // in [0, 2*pi)
    double mass = 0.0;
};

// Atomic probability measure on the circle, or the symbolic uniform measure.
// Invariants: total mass 1 and antipodal symmetry (mass at angle and
// angle + pi agree), which keeps covariances real and fields real-valued.
struct SpectralMeasure {
    enum class Kind { atomic, lebesgue };

    Kind kind = Kind::lebesgue;
    std::vector<SpectralAtom> atoms;  // sorted by angle when atomic

    static SpectralMeasure lebesgue() { return SpectralMeasure{}; }

    static SpectralMeasure atomic(std::vector<SpectralAtom> atoms) {
        SpectralMeasure m;
        m.kind = Kind::atomic;
        m.atoms = std::move(atoms);
        m.validate();
        return m;
    }

    void validate() const {
        if (kind == Kind::lebesgue) return;
        if (atoms.empty()) throw std::invalid_argument("atomic measure needs atoms");
        double total = 0.0;
        for (const auto& a : atoms) {
            if (a.mass <= 0.0) throw std::invalid_argument("atom masses must be positive");
            if (a.angle < 0.0 || a.angle >= 2.0 * M_PI)
                throw std::invalid_argument("atom angles must lie in [0, 2*pi)");
            total += a.mass;
        }
        if (std::fabs(total - 1.0) > 1e-12)
            throw std::invalid_argument("atom masses must sum to 1");
        for (const auto& a : atoms) {
            double opposite = a.angle < M_PI ? a.angle + M_PI : a.angle - M_PI;
            bool found = false;
            for (const auto& b : atoms)
                if (std::fabs(b.angle - opposite) < 1e-9 && std::fabs(b.mass - a.mass) < 1e-9) {
                    found = true;
                    break;
                }
            if (!found) throw std::invalid_argument("measure is not antipodally symmetric");
        }
    }
};

// Four atoms of mass 1/4 on the axes.
inline SpectralMeasure measure_nu() {
    return SpectralMeasure::atomic({{0.0, 0.25},
                                    {0.5 * M_PI, 0.25},
                                    {M_PI, 0.25},
                                    {1.5 * M_PI, 0.25}});
}

// Four atoms of mass 1/4 on the diagonals.
inline SpectralMeasure measure_nu_tilde() {
    return SpectralMeasure::atomic({{0.25 * M_PI, 0.25},
                                    {0.75 * M_PI, 0.25},
                                    {1.25 * M_PI, 0.25},
                                    {1.75 * M_PI, 0.25}});
}

inline SpectralMeasure measure_lebesgue() { return SpectralMeasure::lebesgue(); }

// Uniform measure split into 2K equal arcs, one atom of mass 1/(2K) at each
// arc midpoint k*pi/K (same arc convention as the de-randomisation code).
inline SpectralMeasure discretize_lebesgue(int k_arcs) {
    if (k_arcs < 1) throw std::invalid_argument("K must be >= 1");
    std::vector<SpectralAtom> atoms;
    atoms.reserve(2 * k_arcs);
    for (int k = 0; k < 2 * k_arcs; ++k)
        atoms.push_back({k * M_PI / k_arcs, 1.0 / (2.0 * k_arcs)});
    return SpectralMeasure::atomic(std::move(atoms));
}

// Covariance E[F(x)F(y)] at lag = x - y: a cosine sum over atoms, or
// J0(2*pi*|lag|) for the uniform measure.
inline double covariance(const SpectralMeasure& measure, Vec2 lag) {
    if (measure.kind == SpectralMeasure::Kind::lebesgue) return bessel_j0(2.0 * M_PI * lag.norm());
    double c = 0.0;
    for (const auto& a : measure.atoms) {
        Vec2 zeta{std::cos(a.angle), std::sin(a.angle)};
        c += a.mass * std::cos(2.0 * M_PI * lag.dot(zeta));
    }
    return c;
}

// One realisation of the field: a trigonometric sum over antipodal-pair
// representatives. With E|c_k|^2 = 1 per pair and pair mass 2m the field has
// unit variance: F(x) = sum sqrt(2 m_k) (g1 cos(2 pi <zeta_k, x>) + g2 sin(...)).
struct FieldRealization {
    std::vector<Wave> waves;

    double value(Vec2 x) const { return waves_value(waves, x); }
    Vec2 gradient(Vec2 x) const { return waves_gradient(waves, x); }
};

inline FieldRealization realize_field(const SpectralMeasure& measure, int k_arcs,
                                      std::uint64_t seed) {
    const SpectralMeasure atomic = measure.kind == SpectralMeasure::Kind::lebesgue
                                       ? discretize_lebesgue(k_arcs)
                                       : measure;

    FieldRealization r;
    Rng rng(seed);
    for (const auto& a : atomic.atoms) {
        if (a.angle >= M_PI) continue;  // antipodal representative carries the pair
        double amp = std::sqrt(2.0 * a.mass);
        double g1 = rng.gaussian();
        double g2 = rng.gaussian();
        r.waves.push_back({{std::cos(a.angle), std::sin(a.angle)}, amp * g1, amp * g2});
    }
    if (r.waves.empty()) throw std::invalid_argument("measure has no antipodal pair representatives");
    return r;
}

// Samples one realisation on a grid covering `region` plus a margin.
// Wavelength is 1 for unit-radius frequencies; spacing must resolve it.
inline SampledField sample_field(const SpectralMeasure& measure, int k_arcs, const Region& region,
                                 double spacing, std::uint64_t seed, bool want_gradients = false) {
    if (k_arcs < 1) throw std::invalid_argument("K must be >= 1");
    if (spacing <= 0.0 || spacing > 0.1)
        throw std::invalid_argument("spacing must be positive and at most 1/10 of the wavelength");
    FieldRealization r = realize_field(measure, k_arcs, seed);
    GridSpec grid = make_centered_grid(region.center, region.radius, spacing);
    return sample_waves(r.waves, grid, want_gradients);
}

inline std::string measure_id(const SpectralMeasure& m, int k_arcs = 0) {
    if (m.kind == SpectralMeasure::Kind::lebesgue)
        return k_arcs > 0 ? "lebesgue-K" + std::to_string(k_arcs) : "lebesgue";
    return "atomic-" + std::to_string(m.atoms.size());
}

} // namespace nodalab
