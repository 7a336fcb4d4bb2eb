#pragma once

// Monte Carlo estimation of the nodal-domain density constant of a spectral
// measure: the mean number of domains entirely inside B(R), normalised by the
// disc area pi R^2, so that the count law reads E[N(R)] ~ c * pi * R^2 and
// the local law for eigenfunctions reads N_f(s,z) ~ c * pi * s^2 * E.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nodalab/eigenfunctions.hpp"
#include "nodalab/gaussian_field.hpp"
#include "nodalab/geometry.hpp"
#include "nodalab/nodal.hpp"
#include "nodalab/rng.hpp"
#include "nodalab/stats.hpp"
#include "nodalab/threading.hpp"

namespace nodalab {

struct CnsEstimate {
    std::string measure;
    double r_radius = 0.0;
    int n_realizations = 0;
    double mean_count = 0.0;
    double estimate = 0.0;    // mean_count / (pi R^2)
    double std_error = 0.0;   // Monte Carlo error of `estimate`
    std::uint64_t seed = 0;
    std::vector<double> counts;  // per-realization domain counts, in order
};

struct CnsOptions {
    double spacing = 1.0 / 12.0;  // wavelength/12 for unit-radius frequencies
    int threads = 1;
    // Optional deterministic perturbation a*psi0 added to every realization;
    // psi0 = cos(2 pi x/7) cos(2 pi y/11) scaled to unit C1 norm.
    double psi_amplitude = 0.0;
};

namespace detail {

// psi0 with sup|psi| + sup|grad psi| = 1: the raw product has sup 1 and
// gradient sup 2*pi/7, so divide by 1 + 2*pi/7.
inline double psi_bump(Vec2 x) {
    const double c1_norm = 1.0 + 2.0 * M_PI / 7.0;
    return std::cos(2.0 * M_PI * x.x / 7.0) * std::cos(2.0 * M_PI * x.y / 11.0) / c1_norm;
}

} // namespace detail

namespace detail {

// Rotating the sampling frame of a stationary field changes nothing about
// its nodal-count law, but lining the frame up with the leading atom makes
// the sub-grid connectivity channels of near-degenerate few-atom fields
// axis-aligned, where the saddle resolution can see them.
inline void align_waves_with_measure(std::vector<Wave>& waves, const SpectralMeasure& measure) {
    if (measure.kind != SpectralMeasure::Kind::atomic || measure.atoms.empty()) return;
    double theta = measure.atoms.front().angle;
    double c = std::cos(theta), s = std::sin(theta);
    for (Wave& w : waves) {
        Vec2 f = w.freq;
        w.freq = {c * f.x + s * f.y, -s * f.x + c * f.y};
    }
}

} // namespace detail

inline CnsEstimate estimate_cns(const SpectralMeasure& measure, double r_radius, int k_arcs,
                                int n_realizations, std::uint64_t seed,
                                const CnsOptions& options = {}) {
    if (r_radius < 10.0) throw std::invalid_argument("R must be at least 10");
    if (n_realizations < 50) throw std::invalid_argument("need at least 50 realizations");

    const GridSpec grid = make_centered_grid({0.0, 0.0}, r_radius, options.spacing);
    const Region region = Region::disc({0.0, 0.0}, r_radius);

    std::vector<double> counts(n_realizations, 0.0);
    parallel_for(n_realizations, options.threads, [&](std::size_t i) {
        FieldRealization r = realize_field(measure, k_arcs, Rng::stream(seed, i).next_u64());
        detail::align_waves_with_measure(r.waves, measure);
        SampledField f = sample_waves(r.waves, grid);
        const double amp = options.psi_amplitude;
        if (amp != 0.0) {
            for (int j = 0; j < grid.ny; ++j)
                for (int ii = 0; ii < grid.nx; ++ii)
                    f.values[grid.index(ii, j)] += amp * detail::psi_bump(grid.point(ii, j));
        }
        CountOptions count_options;
        count_options.with_length = false;
        count_options.center_value = [&r, amp](Vec2 p) {
            return r.value(p) + amp * detail::psi_bump(p);
        };
        counts[i] = static_cast<double>(count_nodal_domains(f, region, count_options).domains_inside);
    });

    CnsEstimate est;
    est.measure = measure_id(measure, k_arcs);
    est.r_radius = r_radius;
    est.n_realizations = n_realizations;
    est.seed = seed;
    est.mean_count = mean(counts);
    const double area = M_PI * r_radius * r_radius;
    est.estimate = est.mean_count / area;
    est.std_error = standard_error(counts) / area;
    est.counts = std::move(counts);
    return est;
}

struct StabilityProbe {
    CnsEstimate base;
    CnsEstimate perturbed;
    double psi_amplitude = 0.0;
    double difference = 0.0;
    double relative_change = 0.0;
};

// Same realizations with and without the deterministic C1-small bump.
inline StabilityProbe stability_probe(const SpectralMeasure& measure, double r_radius,
                                      double psi_amplitude, int n_realizations, std::uint64_t seed,
                                      int k_arcs = 64, const CnsOptions& options = {}) {
    StabilityProbe probe;
    probe.psi_amplitude = psi_amplitude;
    probe.base = estimate_cns(measure, r_radius, k_arcs, n_realizations, seed, options);
    CnsOptions perturbed_options = options;
    perturbed_options.psi_amplitude = psi_amplitude;
    probe.perturbed = estimate_cns(measure, r_radius, k_arcs, n_realizations, seed, perturbed_options);
    probe.difference = probe.perturbed.estimate - probe.base.estimate;
    probe.relative_change =
        probe.base.estimate != 0.0 ? std::fabs(probe.difference) / probe.base.estimate : 0.0;
    return probe;
}

// ---------------------------------------------------------------------------
// Local count law experiment: for a flat random eigenfunction, measure
// N_f(s, z)/(pi s^2 E) at random centers and compare with the estimated
// constant of its spectral measure.

struct LocalLawReport {
    long long e = 0;
    std::uint64_t seed = 0;
    double s = 0.0;
    double s_exponent = 0.0;
    std::vector<Vec2> centers;
    std::vector<double> counts;            // domains inside B(s, z_i)
    std::vector<double> normalized_counts; // counts / (pi s^2 E)
    CnsEstimate cns;
    std::vector<double> ratios;            // normalized counts / cns.estimate
    double median_ratio = 0.0;
    double median_deviation = 0.0;         // |median_ratio - 1|
};

inline LocalLawReport local_law_experiment(long long e, std::uint64_t seed, double s_exponent,
                                           int n_centers, double r_radius, int k_arcs,
                                           int n_realizations, const CnsOptions& options = {}) {
    if (s_exponent <= -0.5 || s_exponent >= 0.0)
        throw std::invalid_argument("s exponent must lie in (-1/2, 0)");
    const double sqrt_e = std::sqrt(static_cast<double>(e));
    const double s = std::pow(static_cast<double>(e), s_exponent);
    // The asymptotic needs several wavelengths across the ball.
    if (2.0 * s * sqrt_e < 4.0)
        throw std::invalid_argument("ball spans fewer than two wavelengths; s too small");
    if (s >= 0.5) throw std::invalid_argument("ball does not fit in the torus");

    LocalLawReport rep;
    rep.e = e;
    rep.seed = seed;
    rep.s = s;
    rep.s_exponent = s_exponent;

    EigenfunctionSpec spec = build_flat_random(e, seed);
    const double h = faber_krahn_spacing(sqrt_e);
    Rng rng(Rng::stream(seed, 0xc0ffee).next_u64());
    for (int i = 0; i < n_centers; ++i)
        rep.centers.push_back({rng.uniform01(), rng.uniform01()});

    auto waves = std::make_shared<std::vector<Wave>>(spec_waves(spec));
    CountOptions count_options;
    count_options.with_length = false;
    count_options.center_value = [waves](Vec2 p) { return waves_value(*waves, p); };
    std::vector<double> counts(n_centers, 0.0);
    parallel_for(n_centers, options.threads, [&](std::size_t i) {
        Vec2 z = rep.centers[i];
        SampledField f = sample_spec(spec, make_centered_grid(z, s, h));
        counts[i] = static_cast<double>(
            count_nodal_domains(f, Region::disc(z, s), count_options).domains_inside);
    });
    rep.counts = counts;
    const double norm = M_PI * s * s * static_cast<double>(e);
    for (double c : counts) rep.normalized_counts.push_back(c / norm);

    rep.cns = estimate_cns(spectral_measure(spec), r_radius, k_arcs, n_realizations,
                           Rng::stream(seed, 0xcafe).next_u64(), options);
    for (double nc : rep.normalized_counts) rep.ratios.push_back(nc / rep.cns.estimate);
    rep.median_ratio = median(rep.ratios);
    rep.median_deviation = std::fabs(rep.median_ratio - 1.0);
    return rep;
}

} // namespace nodalab
