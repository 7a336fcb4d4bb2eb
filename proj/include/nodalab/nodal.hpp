#pragma once

// Grid-based nodal statistics: counts of sign components entirely inside a
// probe region (union-find over cell centers, 4-connectivity), marching-
// squares nodal length clipped to the region, and the semi-local count
// decomposition over small balls.
//
// Conventions, fixed for reproducibility:
//  - region membership is decided at cell centers; the region boundary is
//    not sub-sampled;
//  - exact zeros count as positive (a 1e-12-of-scale perturbation);
//  - a component touching the one-cell boundary ring of the mask is
//    "boundary-touching", everything else is "entirely inside".

#include <array>
#include <cmath>
#include <functional>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nodalab/eigenfunctions.hpp"
#include "nodalab/geometry.hpp"
#include "nodalab/rng.hpp"
#include "nodalab/stats.hpp"

namespace nodalab {

struct NodalReport {
    long long domains_inside = 0;
    long long domains_touching_boundary = 0;
    double nodal_length = 0.0;
    double grid_spacing_used = 0.0;
    std::string region;
};

// Default sampling spacing: one twelfth of the wavelength 1/frequency_radius,
// so every nodal domain (inner radius on the order of a wavelength fraction)
// spans several cells.
inline double faber_krahn_spacing(double frequency_radius) {
    if (frequency_radius <= 0.0) throw std::invalid_argument("frequency radius must be positive");
    return 1.0 / (frequency_radius * 12.0);
}

namespace detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::int32_t>(i);
    }
    std::int32_t find(std::int32_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];  // path halving
            i = parent_[i];
        }
        return i;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[b] = a;
    }

private:
    std::vector<std::int32_t> parent_;
};

inline bool positive_sign(double v) {
    // exact zeros perturbed to the positive side
    return v >= 0.0;
}

inline void check_coverage(const SampledField& field, const Region& region) {
    const GridSpec& g = field.grid;
    double h = g.spacing;
    double lo_x = g.origin.x - 0.5 * h, lo_y = g.origin.y - 0.5 * h;
    double hi_x = g.origin.x + (g.nx - 0.5) * h, hi_y = g.origin.y + (g.ny - 0.5) * h;
    if (region.center.x - region.radius < lo_x + h || region.center.x + region.radius > hi_x - h ||
        region.center.y - region.radius < lo_y + h || region.center.y + region.radius > hi_y - h)
        throw std::invalid_argument("field does not cover the region plus a one-cell margin");
}

// Clips segment [p, q] to the region; returns the retained length.
inline double clip_length(const Region& region, Vec2 p, Vec2 q) {
    if (region.shape == Region::Shape::square) {
        // Liang-Barsky on the axis-aligned square
        double t0 = 0.0, t1 = 1.0;
        double dx = q.x - p.x, dy = q.y - p.y;
        auto clip = [&](double denom, double numer) {
            if (denom == 0.0) return numer <= 0.0;
            double t = numer / denom;
            if (denom < 0.0) {
                if (t > t1) return false;
                if (t > t0) t0 = t;
            } else {
                if (t < t0) return false;
                if (t < t1) t1 = t;
            }
            return true;
        };
        double xl = region.center.x - region.radius, xh = region.center.x + region.radius;
        double yl = region.center.y - region.radius, yh = region.center.y + region.radius;
        if (!clip(-dx, xl - p.x) || !clip(dx, p.x - xh) || !clip(-dy, yl - p.y) ||
            !clip(dy, p.y - yh))
            return 0.0;
        return (t1 - t0) * std::sqrt(dx * dx + dy * dy);
    }
    // Disc: solve |p + t d - c|^2 = r^2 for the retained parameter interval.
    Vec2 d = q - p;
    Vec2 m = p - region.center;
    double a = d.norm2();
    if (a == 0.0) return 0.0;
    double b = 2.0 * m.dot(d);
    double c = m.norm2() - region.radius * region.radius;
    double disc = b * b - 4.0 * a * c;
    if (disc <= 0.0) return c < 0.0 ? std::sqrt(a) : 0.0;
    double sq = std::sqrt(disc);
    double t0 = (-b - sq) / (2.0 * a), t1 = (-b + sq) / (2.0 * a);
    t0 = std::max(t0, 0.0);
    t1 = std::min(t1, 1.0);
    if (t1 <= t0) return 0.0;
    return (t1 - t0) * std::sqrt(a);
}

} // namespace detail

// Marching squares: zero-level segments of the field, linearly interpolated
// along plaquette edges, clipped to the region. Saddle plaquettes are split
// according to the sign of the center (average of the four corners).
inline std::vector<std::array<Vec2, 2>> nodal_segments(const SampledField& field,
                                                       const Region& region) {
    detail::check_coverage(field, region);
    const GridSpec& g = field.grid;
    std::vector<std::array<Vec2, 2>> segments;

    auto interp = [](Vec2 a, Vec2 b, double va, double vb) {
        double t = va / (va - vb);
        return Vec2{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    };

    for (int j = 0; j + 1 < g.ny; ++j) {
        for (int i = 0; i + 1 < g.nx; ++i) {
            Vec2 p00 = g.point(i, j), p10 = g.point(i + 1, j);
            Vec2 p01 = g.point(i, j + 1), p11 = g.point(i + 1, j + 1);
            if (!region.contains(p00) && !region.contains(p10) && !region.contains(p01) &&
                !region.contains(p11))
                continue;
            double v00 = field.at(i, j), v10 = field.at(i + 1, j);
            double v01 = field.at(i, j + 1), v11 = field.at(i + 1, j + 1);
            int c = (detail::positive_sign(v00) ? 1 : 0) | (detail::positive_sign(v10) ? 2 : 0) |
                    (detail::positive_sign(v01) ? 4 : 0) | (detail::positive_sign(v11) ? 8 : 0);
            if (c == 0 || c == 15) continue;

            auto bottom = [&] { return interp(p00, p10, v00, v10); };
            auto top = [&] { return interp(p01, p11, v01, v11); };
            auto left = [&] { return interp(p00, p01, v00, v01); };
            auto right = [&] { return interp(p10, p11, v10, v11); };

            auto emit = [&](Vec2 a, Vec2 b) { segments.push_back({a, b}); };
            switch (c) {
                case 1: case 14: emit(left(), bottom()); break;
                case 2: case 13: emit(bottom(), right()); break;
                case 4: case 11: emit(left(), top()); break;
                case 8: case 7: emit(top(), right()); break;
                case 3: case 12: emit(left(), right()); break;
                case 5: case 10: emit(bottom(), top()); break;
                case 6:
                case 9: {
                    bool center_positive = detail::positive_sign(0.25 * (v00 + v10 + v01 + v11));
                    // pair the crossings so same-sign corners stay connected
                    if ((c == 6) == center_positive) {
                        emit(left(), bottom());
                        emit(top(), right());
                    } else {
                        emit(left(), top());
                        emit(bottom(), right());
                    }
                    break;
                }
                default: break;
            }
        }
    }
    return segments;
}

inline double nodal_length(const SampledField& field, const Region& region) {
    double total = 0.0;
    for (const auto& seg : nodal_segments(field, region))
        total += detail::clip_length(region, seg[0], seg[1]);
    return total;
}

struct CountOptions {
    bool with_length = true;
    // True field value at plaquette centers. When set, saddle plaquettes
    // (equal-sign diagonals) unite the diagonal matching the center sign,
    // which resolves connectivity channels narrower than the grid spacing.
    // Exact crossings stay split: the union happens only when the center
    // value clears a dead band relative to the field scale.
    std::function<double(Vec2)> center_value;
    double center_deadband_rel = 1e-9;
};

// Counts sign components of the field restricted to region cells.
inline NodalReport count_nodal_domains(const SampledField& field, const Region& region,
                                       const CountOptions& options) {
    detail::check_coverage(field, region);
    const GridSpec& g = field.grid;
    const int nx = g.nx, ny = g.ny;

    std::vector<std::uint8_t> mask(g.size(), 0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (region.contains(g.point(i, j))) mask[g.index(i, j)] = 1;

    detail::UnionFind uf(g.size());
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            std::size_t idx = g.index(i, j);
            if (!mask[idx]) continue;
            bool sgn = detail::positive_sign(field.values[idx]);
            if (i + 1 < nx && mask[idx + 1] &&
                detail::positive_sign(field.values[idx + 1]) == sgn)
                uf.unite(static_cast<std::int32_t>(idx), static_cast<std::int32_t>(idx + 1));
            if (j + 1 < ny && mask[idx + nx] &&
                detail::positive_sign(field.values[idx + nx]) == sgn)
                uf.unite(static_cast<std::int32_t>(idx), static_cast<std::int32_t>(idx + nx));
        }
    }

    if (options.center_value) {
        double scale = 0.0;
        for (double v : field.values) scale = std::max(scale, std::fabs(v));
        const double deadband = options.center_deadband_rel * scale;
        for (int j = 0; j + 1 < ny; ++j) {
            for (int i = 0; i + 1 < nx; ++i) {
                std::size_t i00 = g.index(i, j), i10 = i00 + 1;
                std::size_t i01 = i00 + nx, i11 = i01 + 1;
                if (!mask[i00] || !mask[i10] || !mask[i01] || !mask[i11]) continue;
                bool s00 = detail::positive_sign(field.values[i00]);
                bool s10 = detail::positive_sign(field.values[i10]);
                bool s01 = detail::positive_sign(field.values[i01]);
                bool s11 = detail::positive_sign(field.values[i11]);
                if (s00 != s11 || s10 != s01 || s00 == s10) continue;  // not a saddle
                Vec2 center = g.point(i, j);
                center.x += 0.5 * g.spacing;
                center.y += 0.5 * g.spacing;
                double vc = options.center_value(center);
                if (std::fabs(vc) <= deadband) continue;
                if (detail::positive_sign(vc) == s00)
                    uf.unite(static_cast<std::int32_t>(i00), static_cast<std::int32_t>(i11));
                else
                    uf.unite(static_cast<std::int32_t>(i10), static_cast<std::int32_t>(i01));
            }
        }
    }

    // Boundary ring: mask cells with a 4-neighbour outside the mask or grid.
    std::vector<std::uint8_t> touches(g.size(), 0);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            std::size_t idx = g.index(i, j);
            if (!mask[idx]) continue;
            bool ring = i == 0 || i == nx - 1 || j == 0 || j == ny - 1 || !mask[idx - 1] ||
                        !mask[idx + 1] || !mask[idx - nx] || !mask[idx + nx];
            if (ring) touches[uf.find(static_cast<std::int32_t>(idx))] = 1;
        }
    }

    NodalReport rep;
    rep.grid_spacing_used = g.spacing;
    rep.region = region.describe();
    std::vector<std::uint8_t> seen(g.size(), 0);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            std::size_t idx = g.index(i, j);
            if (!mask[idx]) continue;
            std::int32_t root = uf.find(static_cast<std::int32_t>(idx));
            if (seen[root]) continue;
            seen[root] = 1;
            if (touches[root])
                ++rep.domains_touching_boundary;
            else
                ++rep.domains_inside;
        }
    }
    if (options.with_length) rep.nodal_length = nodal_length(field, region);
    return rep;
}

inline NodalReport count_nodal_domains(const SampledField& field, const Region& region,
                                       bool with_length = true) {
    CountOptions options;
    options.with_length = with_length;
    return count_nodal_domains(field, region, options);
}

// ---------------------------------------------------------------------------
// Semi-local decomposition: compares the direct count over B(s,z) with the
// average of counts over balls of radius R/sqrt(E) with centers drawn from
// B(s,z). Each small domain is seen from a ball-of-centers of area
// ~ pi (R/sqrt(E))^2, so the area-normalised prefactor is E/(pi R^2).

struct SemiLocalityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double difference = 0.0;
    double bound_scale = 0.0;  // E s^2 / sqrt(R)
    double fitted_constant = 0.0;
    long long e = 0;
    double s = 0.0;
    double r_parameter = 0.0;
    int n_centers = 0;
};

inline SemiLocalityReport semi_locality_check(const EigenfunctionSpec& spec, double s, Vec2 z,
                                              double r_parameter, int n_centers = 200,
                                              std::uint64_t seed = 1) {
    double sqrt_e = std::sqrt(static_cast<double>(spec.e));
    if (s <= 1.0 / sqrt_e) throw std::invalid_argument("s must exceed one wavelength 1/sqrt(E)");
    if (r_parameter < 4.0) throw std::invalid_argument("R must be at least 4");
    const double h = faber_krahn_spacing(sqrt_e);

    auto waves = std::make_shared<std::vector<Wave>>(spec_waves(spec));
    CountOptions count_options;
    count_options.with_length = false;
    count_options.center_value = [waves](Vec2 p) { return waves_value(*waves, p); };

    Region big = Region::disc(z, s);
    SampledField f = sample_spec(spec, make_centered_grid(z, s, h));
    double lhs = static_cast<double>(count_nodal_domains(f, big, count_options).domains_inside);

    const double r_small = r_parameter / sqrt_e;
    Rng rng(seed);
    std::vector<double> counts(n_centers);
    for (int i = 0; i < n_centers; ++i) {
        Vec2 x = rng.uniform_in_disc(z, s);
        SampledField local = sample_spec(spec, make_centered_grid(x, r_small, h));
        counts[i] = static_cast<double>(
            count_nodal_domains(local, Region::disc(x, r_small), count_options).domains_inside);
    }
    double mean_count = mean(counts);

    SemiLocalityReport rep;
    rep.e = spec.e;
    rep.s = s;
    rep.r_parameter = r_parameter;
    rep.n_centers = n_centers;
    rep.lhs = lhs;
    // (E/(pi R^2)) * integral over B(s,z) = (E/(pi R^2)) * pi s^2 * mean
    rep.rhs = static_cast<double>(spec.e) * s * s * mean_count / (r_parameter * r_parameter);
    rep.difference = std::fabs(rep.lhs - rep.rhs);
    rep.bound_scale = static_cast<double>(spec.e) * s * s / std::sqrt(r_parameter);
    rep.fitted_constant = rep.bound_scale > 0.0 ? rep.difference / rep.bound_scale : 0.0;
    return rep;
}

} // namespace nodalab
