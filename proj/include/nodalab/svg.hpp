#pragma once

// Minimal static SVG emission for the CLI: segment soups (nodal sets), bar
// charts (moment deviations) and line charts (estimates vs R). Output is
// deterministic; plots never feed back into numeric results.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "nodalab/geometry.hpp"

namespace nodalab {

class SvgCanvas {
public:
    SvgCanvas(double width, double height) : w_(width), h_(height) {
        body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
              << "\" viewBox=\"0 0 " << w_ << " " << h_ << "\">\n";
        body_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    }

    void line(double x1, double y1, double x2, double y2, const std::string& color,
              double width = 1.0) {
        body_ << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
              << "\" stroke=\"" << color << "\" stroke-width=\"" << width << "\"/>\n";
    }
    void circle(double cx, double cy, double r, const std::string& stroke) {
        body_ << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << r
              << "\" fill=\"none\" stroke=\"" << stroke << "\"/>\n";
    }
    void rect(double x, double y, double w, double h, const std::string& fill) {
        body_ << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << h
              << "\" fill=\"" << fill << "\"/>\n";
    }
    void text(double x, double y, const std::string& s, int size = 12) {
        body_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
              << "\" font-family=\"monospace\">" << s << "</text>\n";
    }

    std::string finish() {
        body_ << "</svg>\n";
        return body_.str();
    }

private:
    double w_, h_;
    std::ostringstream body_;
};

// Nodal segments inside a disc, mapped to a square canvas.
inline std::string svg_nodal_plot(const std::vector<std::array<Vec2, 2>>& segments, Vec2 center,
                                  double radius) {
    const double size = 640.0, pad = 20.0;
    const double scale = (size - 2 * pad) / (2 * radius);
    auto mapx = [&](double x) { return pad + (x - (center.x - radius)) * scale; };
    auto mapy = [&](double y) { return size - pad - (y - (center.y - radius)) * scale; };
    SvgCanvas canvas(size, size);
    canvas.circle(mapx(center.x), mapy(center.y), radius * scale, "#888888");
    for (const auto& seg : segments)
        canvas.line(mapx(seg[0].x), mapy(seg[0].y), mapx(seg[1].x), mapy(seg[1].y), "#003366", 0.6);
    return canvas.finish();
}

// Bar chart of labelled nonnegative values.
inline std::string svg_bar_chart(const std::vector<std::pair<std::string, double>>& bars,
                                 const std::string& title) {
    const double w = 720.0, h = 360.0, pad = 50.0;
    double vmax = 1e-300;
    for (const auto& [label, v] : bars) vmax = std::max(vmax, v);
    SvgCanvas canvas(w, h);
    canvas.text(pad, 24, title, 14);
    double bw = (w - 2 * pad) / std::max<std::size_t>(1, bars.size());
    for (std::size_t i = 0; i < bars.size(); ++i) {
        double bh = (h - 2 * pad) * bars[i].second / vmax;
        canvas.rect(pad + i * bw + 2, h - pad - bh, bw - 4, bh, "#336699");
        canvas.text(pad + i * bw + 2, h - pad + 14, bars[i].first, 10);
    }
    canvas.line(pad, h - pad, w - pad, h - pad, "#000000");
    return canvas.finish();
}

// Line chart with error bars: points (x, y, yerr).
inline std::string svg_line_chart(const std::vector<std::array<double, 3>>& points,
                                  const std::string& title) {
    const double w = 720.0, h = 360.0, pad = 50.0;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : points) {
        xmin = std::min(xmin, p[0]);
        xmax = std::max(xmax, p[0]);
        ymin = std::min(ymin, p[1] - p[2]);
        ymax = std::max(ymax, p[1] + p[2]);
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    double span = ymax - ymin;
    ymin -= 0.1 * (span > 0 ? span : 1.0);
    ymax += 0.1 * (span > 0 ? span : 1.0);
    auto mapx = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (w - 2 * pad); };
    auto mapy = [&](double y) { return h - pad - (y - ymin) / (ymax - ymin) * (h - 2 * pad); };
    SvgCanvas canvas(w, h);
    canvas.text(pad, 24, title, 14);
    canvas.line(pad, h - pad, w - pad, h - pad, "#000000");
    canvas.line(pad, pad, pad, h - pad, "#000000");
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        canvas.line(mapx(points[i][0]), mapy(points[i][1]), mapx(points[i + 1][0]),
                    mapy(points[i + 1][1]), "#993300", 1.5);
    for (const auto& p : points) {
        canvas.line(mapx(p[0]), mapy(p[1] - p[2]), mapx(p[0]), mapy(p[1] + p[2]), "#993300");
        canvas.circle(mapx(p[0]), mapy(p[1]), 2.5, "#993300");
    }
    return canvas.finish();
}

} // namespace nodalab
