#pragma once

// Toral Laplace eigenfunctions f(x) = sum a_xi e(<x, xi>) over |xi|^2 = E,
// with Hermitian coefficients and unit L^2 norm, plus their restrictions to
// Planck-scale discs and the sine/cosine eigenfunctions of the unit square.
// Phase convention throughout: e(t) = exp(2*pi*i*t).

#include <algorithm>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nodalab/gaussian_field.hpp"
#include "nodalab/geometry.hpp"
#include "nodalab/lattice.hpp"
#include "nodalab/rng.hpp"
#include "nodalab/trigsum.hpp"

namespace nodalab {

struct EigenfunctionSpec {
    long long e = 0;
    // Coefficients in canonical (angle-sorted) frequency order.
    std::vector<std::pair<Frequency, std::complex<double>>> coefficients;

    std::size_t size() const { return coefficients.size(); }
};

// Validates the three construction invariants: every frequency on the circle,
// Hermitian symmetry a_{-xi} = conj(a_xi), and unit coefficient mass.
inline EigenfunctionSpec make_eigenfunction_spec(
    long long e, std::vector<std::pair<Frequency, std::complex<double>>> coeffs) {
    double mass = 0.0;
    std::map<Frequency, std::complex<double>> by_freq;
    for (const auto& [f, a] : coeffs) {
        if (f.x * f.x + f.y * f.y != e)
            throw std::invalid_argument("coefficient frequency is not on the circle |xi|^2 = E");
        if (std::norm(a) == 0.0)
            throw std::invalid_argument("zero coefficients must be omitted, not stored");
        if (!by_freq.emplace(f, a).second)
            throw std::invalid_argument("duplicate coefficient frequency");
        mass += std::norm(a);
    }
    for (const auto& [f, a] : by_freq) {
        auto it = by_freq.find(Frequency{-f.x, -f.y});
        if (it == by_freq.end() || std::abs(it->second - std::conj(a)) > 1e-12)
            throw std::invalid_argument("coefficients are not Hermitian symmetric");
    }
    if (std::fabs(mass - 1.0) > 1e-12)
        throw std::invalid_argument("coefficients are not L2-normalised");

    std::sort(coeffs.begin(), coeffs.end(), [](const auto& u, const auto& v) {
        return frequency_angle(u.first) < frequency_angle(v.first);
    });
    return EigenfunctionSpec{e, std::move(coeffs)};
}

// Flat random eigenfunction: |a_xi| = 1/sqrt(N) with an independent uniform
// phase per antipodal pair (representative angle in [0, pi)) and conjugate
// phase on the negative.
inline EigenfunctionSpec build_flat_random(long long e, std::uint64_t seed) {
    auto pts = lattice_points(e);
    if (pts.empty()) throw std::invalid_argument("E is not a sum of two squares");
    double amp = 1.0 / std::sqrt(static_cast<double>(pts.size()));
    Rng rng(seed);
    std::vector<std::pair<Frequency, std::complex<double>>> coeffs;
    coeffs.reserve(pts.size());
    for (const auto& p : pts) {
        if (frequency_angle(p) >= M_PI) continue;
        double theta = rng.uniform(0.0, 2.0 * M_PI);
        std::complex<double> a = std::polar(amp, theta);
        coeffs.emplace_back(p, a);
        coeffs.emplace_back(Frequency{-p.x, -p.y}, std::conj(a));
    }
    return make_eigenfunction_spec(e, std::move(coeffs));
}

// Waves over antipodal-pair representatives: a_xi e(<x,xi>) + conj terms
// collapse to 2 Re(a) cos - 2 Im(a) sin, so sums are real by construction.
inline std::vector<Wave> spec_waves(const EigenfunctionSpec& spec) {
    std::vector<Wave> waves;
    waves.reserve(spec.size() / 2);
    for (const auto& [f, a] : spec.coefficients) {
        if (frequency_angle(f) >= M_PI) continue;
        waves.push_back({{static_cast<double>(f.x), static_cast<double>(f.y)},
                         2.0 * a.real(), -2.0 * a.imag()});
    }
    return waves;
}

inline double evaluate_at(const EigenfunctionSpec& spec, Vec2 x) {
    return waves_value(spec_waves(spec), x);
}

inline std::vector<double> evaluate(const EigenfunctionSpec& spec, const std::vector<Vec2>& xs) {
    auto waves = spec_waves(spec);
    std::vector<double> vals;
    vals.reserve(xs.size());
    for (const auto& x : xs) vals.push_back(waves_value(waves, x));
    return vals;
}

inline Vec2 gradient_at(const EigenfunctionSpec& spec, Vec2 x) {
    return waves_gradient(spec_waves(spec), x);
}

inline std::vector<Vec2> gradient(const EigenfunctionSpec& spec, const std::vector<Vec2>& xs) {
    auto waves = spec_waves(spec);
    std::vector<Vec2> grads;
    grads.reserve(xs.size());
    for (const auto& x : xs) grads.push_back(waves_gradient(waves, x));
    return grads;
}

inline SampledField sample_spec(const EigenfunctionSpec& spec, const GridSpec& grid,
                                bool want_gradients = false) {
    return sample_waves(spec_waves(spec), grid, want_gradients);
}

// Spectral measure: atom of mass |a_xi|^2 at the angle of xi/sqrt(E).
inline SpectralMeasure spectral_measure(const EigenfunctionSpec& spec) {
    std::vector<SpectralAtom> atoms;
    atoms.reserve(spec.size());
    for (const auto& [f, a] : spec.coefficients) atoms.push_back({frequency_angle(f), std::norm(a)});
    return SpectralMeasure::atomic(std::move(atoms));
}

// N(E) * max |a_xi|^2; equals 1 exactly for full-support equimodular
// coefficients. N is the circle multiplicity, not the stored count, so
// concentrating mass on few frequencies raises the index.
inline double flatness_index(const EigenfunctionSpec& spec) {
    double mx = 0.0;
    for (const auto& [f, a] : spec.coefficients) mx = std::max(mx, std::norm(a));
    return static_cast<double>(multiplicity(spec.e)) * mx;
}

// A field on the unit disc with evaluable value and gradient.
struct LocalField {
    std::function<double(Vec2)> value;
    std::function<Vec2(Vec2)> grad;
};

// Planck-scale restriction F(y) = f(center + (R/sqrt(E)) y) for y in B(1);
// the chain-rule factor R/sqrt(E) is built into the gradient.
inline LocalField restrict_to_ball(const EigenfunctionSpec& spec, Vec2 center, double r_scale) {
    if (r_scale <= 0.0) throw std::invalid_argument("R must be positive");
    double scale = r_scale / std::sqrt(static_cast<double>(spec.e));
    auto waves = std::make_shared<std::vector<Wave>>(spec_waves(spec));
    LocalField f;
    f.value = [waves, center, scale](Vec2 y) {
        return waves_value(*waves, {center.x + scale * y.x, center.y + scale * y.y});
    };
    f.grad = [waves, center, scale](Vec2 y) {
        Vec2 g = waves_gradient(*waves, {center.x + scale * y.x, center.y + scale * y.y});
        return Vec2{scale * g.x, scale * g.y};
    };
    return f;
}

// ---------------------------------------------------------------------------
// Boundary-adapted eigenfunctions of the unit square.
// Equivalence classes of frequencies under coordinate sign changes and swap;
// the representative (p, q) has p >= q >= 0.

enum class BoundaryCondition { dirichlet, neumann };

struct BoundaryAdaptedSpec {
    long long e = 0;
    BoundaryCondition condition = BoundaryCondition::dirichlet;
    // Class representative (p >= q >= 0) and its real amplitude.
    std::vector<std::pair<Frequency, double>> coefficients;
};

inline std::vector<Frequency> boundary_class_representatives(long long e) {
    std::vector<Frequency> reps;
    for (const auto& p : lattice_points(e)) {
        long long a = std::llabs(p.x), b = std::llabs(p.y);
        if (a < b) std::swap(a, b);
        Frequency rep{a, b};
        if (std::find(reps.begin(), reps.end(), rep) == reps.end()) reps.push_back(rep);
    }
    std::sort(reps.begin(), reps.end());
    return reps;
}

// Random real coefficients over the classes, normalised to unit L^2 norm on
// the square. Dirichlet classes with a zero coordinate have an identically
// vanishing sine product and are dropped.
inline BoundaryAdaptedSpec build_boundary_adapted(long long e, BoundaryCondition condition,
                                                  std::uint64_t seed) {
    auto reps = boundary_class_representatives(e);
    if (reps.empty()) throw std::invalid_argument("E is not a sum of two squares");
    Rng rng(seed);
    std::vector<std::pair<Frequency, double>> coeffs;
    double norm2 = 0.0;
    for (const auto& rep : reps) {
        bool has_zero = rep.x == 0 || rep.y == 0;
        double g = rng.gaussian();  // one draw per class, skipped classes included for stream stability
        if (condition == BoundaryCondition::dirichlet && has_zero) continue;
        double w;  // squared L2 norm of the product basis function
        if (condition == BoundaryCondition::dirichlet) {
            w = 0.25;
        } else {
            w = has_zero ? 0.5 : 0.25;
        }
        coeffs.emplace_back(rep, g);
        norm2 += g * g * w;
    }
    if (coeffs.empty() || norm2 == 0.0)
        throw std::invalid_argument("no admissible boundary-adapted classes");
    double scale = 1.0 / std::sqrt(norm2);
    for (auto& [rep, a] : coeffs) a *= scale;
    BoundaryAdaptedSpec spec;
    spec.e = e;
    spec.condition = condition;
    spec.coefficients = std::move(coeffs);
    return spec;
}

inline double evaluate_boundary_adapted(const BoundaryAdaptedSpec& spec, Vec2 x) {
    double v = 0.0;
    for (const auto& [rep, a] : spec.coefficients) {
        double u1 = M_PI * rep.x * x.x, u2 = M_PI * rep.y * x.y;
        if (spec.condition == BoundaryCondition::dirichlet)
            v += a * std::sin(u1) * std::sin(u2);
        else
            v += a * std::cos(u1) * std::cos(u2);
    }
    return v;
}

// Same sums through the product-to-sum identities; used as a cross-check of
// the direct evaluator.
inline double evaluate_boundary_adapted_sumform(const BoundaryAdaptedSpec& spec, Vec2 x) {
    double v = 0.0;
    for (const auto& [rep, a] : spec.coefficients) {
        double diff = M_PI * (rep.x * x.x - rep.y * x.y);
        double sum = M_PI * (rep.x * x.x + rep.y * x.y);
        if (spec.condition == BoundaryCondition::dirichlet)
            v += a * 0.5 * (std::cos(diff) - std::cos(sum));
        else
            v += a * 0.5 * (std::cos(diff) + std::cos(sum));
    }
    return v;
}

// Grid sampling of the boundary-adapted field (the formula extends the
// function beyond the unit square by reflections).
inline SampledField sample_boundary_adapted(const BoundaryAdaptedSpec& spec, const GridSpec& grid) {
    SampledField f;
    f.grid = grid;
    f.values.resize(grid.size());
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            f.values[grid.index(i, j)] = evaluate_boundary_adapted(spec, grid.point(i, j));
    return f;
}

// ---------------------------------------------------------------------------
// Text serialisation: first line E, then one "x y re im" line per frequency
// in canonical order, 17 significant digits (exact double round-trip).

inline void write_spec(const EigenfunctionSpec& spec, std::ostream& os) {
    os << spec.e << "\n";
    char buf[96];
    for (const auto& [f, a] : spec.coefficients) {
        std::snprintf(buf, sizeof(buf), "%lld %lld %.17g %.17g\n", f.x, f.y, a.real(), a.imag());
        os << buf;
    }
}

inline EigenfunctionSpec read_spec(std::istream& is) {
    long long e;
    if (!(is >> e)) throw std::runtime_error("spec file: missing eigenvalue line");
    std::vector<std::pair<Frequency, std::complex<double>>> coeffs;
    long long x, y;
    double re, im;
    while (is >> x >> y >> re >> im) coeffs.emplace_back(Frequency{x, y}, std::complex<double>{re, im});
    return make_eigenfunction_spec(e, std::move(coeffs));
}

inline void save_spec(const EigenfunctionSpec& spec, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open spec file for writing: " + path);
    write_spec(spec, os);
}

inline EigenfunctionSpec load_spec(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open spec file: " + path);
    return read_spec(is);
}

} // namespace nodalab
