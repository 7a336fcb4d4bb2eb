#pragma once

// Plane geometry primitives shared by the field, nodal and experiment code:
// 2D vectors, uniform sampling grids, and the disc/square probe regions.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nodalab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double t) const { return {x * t, y * t}; }
    Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double t, const Vec2& v) { return v * t; }

// Uniform grid of sample points: point(i,j) = origin + (i*spacing, j*spacing).
struct GridSpec {
    Vec2 origin;
    double spacing = 0.0;
    int nx = 0;
    int ny = 0;

    Vec2 point(int i, int j) const {
        return {origin.x + i * spacing, origin.y + j * spacing};
    }
    std::size_t size() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) +
               static_cast<std::size_t>(i);
    }
};

// Grid centred on `center` covering radius `radius` plus `margin_cells` cells.
// Sample points sit at center + (k + 1/2)*spacing, so symmetry lines of
// lattice-aligned fixtures fall between samples and exact zeros are avoided.
inline GridSpec make_centered_grid(Vec2 center, double radius, double spacing,
                                   int margin_cells = 2) {
    if (spacing <= 0.0) throw std::invalid_argument("grid spacing must be > 0");
    int half = static_cast<int>(std::ceil(radius / spacing)) + margin_cells;
    GridSpec g;
    g.spacing = spacing;
    g.nx = 2 * half;
    g.ny = 2 * half;
    g.origin = {center.x - (half - 0.5) * spacing, center.y - (half - 0.5) * spacing};
    return g;
}

// Probe region: open disc B(radius, center) or axis-aligned square of given
// half side around center.
struct Region {
    enum class Shape { disc, square };

    Shape shape = Shape::disc;
    Vec2 center;
    double radius = 0.0;  // disc radius or square half side

    static Region disc(Vec2 center, double radius) {
        if (radius <= 0.0) throw std::invalid_argument("disc radius must be > 0");
        return Region{Shape::disc, center, radius};
    }
    static Region square(Vec2 center, double half_side) {
        if (half_side <= 0.0) throw std::invalid_argument("square half side must be > 0");
        return Region{Shape::square, center, half_side};
    }

    bool contains(const Vec2& p) const {
        if (shape == Shape::disc) return (p - center).norm2() < radius * radius;
        return std::fabs(p.x - center.x) < radius && std::fabs(p.y - center.y) < radius;
    }
    double area() const {
        if (shape == Shape::disc) return M_PI * radius * radius;
        return 4.0 * radius * radius;
    }
    std::string describe() const {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s(%.17g,%.17g;%.17g)",
                      shape == Shape::disc ? "disc" : "square", center.x, center.y, radius);
        return buf;
    }
};

// Real values (optionally gradients) of a function sampled on a grid.
struct SampledField {
    GridSpec grid;
    std::vector<double> values;
    std::vector<Vec2> gradients;  // empty unless requested

    double at(int i, int j) const { return values[grid.index(i, j)]; }
    bool has_gradients() const { return !gradients.empty(); }
};

} // namespace nodalab
