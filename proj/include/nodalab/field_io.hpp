#pragma once

// Text serialisation of sampled fields: a small header (origin, spacing,
// dims, gradient flag) followed by one row of values per line, 17
// significant digits throughout.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "nodalab/geometry.hpp"
#include "nodalab/io.hpp"

namespace nodalab {

inline void write_field(const SampledField& field, std::ostream& os) {
    const GridSpec& g = field.grid;
    os << "nodalab-field 1\n";
    os << "origin " << format_double(g.origin.x) << " " << format_double(g.origin.y) << "\n";
    os << "spacing " << format_double(g.spacing) << "\n";
    os << "dims " << g.nx << " " << g.ny << "\n";
    os << "gradients " << (field.has_gradients() ? 1 : 0) << "\n";
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (i) os << ' ';
            os << format_double(field.at(i, j));
        }
        os << '\n';
    }
    if (field.has_gradients()) {
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const Vec2& v = field.gradients[g.index(i, j)];
                if (i) os << ' ';
                os << format_double(v.x) << ' ' << format_double(v.y);
            }
            os << '\n';
        }
    }
}

inline SampledField read_field(std::istream& is) {
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "nodalab-field" || version != 1)
        throw std::runtime_error("not a nodalab field file");
    SampledField f;
    std::string key;
    int has_grad = 0;
    if (!(is >> key >> f.grid.origin.x >> f.grid.origin.y) || key != "origin")
        throw std::runtime_error("field file: bad origin line");
    if (!(is >> key >> f.grid.spacing) || key != "spacing")
        throw std::runtime_error("field file: bad spacing line");
    if (!(is >> key >> f.grid.nx >> f.grid.ny) || key != "dims")
        throw std::runtime_error("field file: bad dims line");
    if (!(is >> key >> has_grad) || key != "gradients")
        throw std::runtime_error("field file: bad gradients line");
    f.values.resize(f.grid.size());
    for (auto& v : f.values)
        if (!(is >> v)) throw std::runtime_error("field file: truncated values");
    if (has_grad) {
        f.gradients.resize(f.grid.size());
        for (auto& g : f.gradients)
            if (!(is >> g.x >> g.y)) throw std::runtime_error("field file: truncated gradients");
    }
    return f;
}

inline void save_field(const SampledField& field, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open field file for writing: " + path);
    write_field(field, os);
}

inline SampledField load_field(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open field file: " + path);
    return read_field(is);
}

} // namespace nodalab
