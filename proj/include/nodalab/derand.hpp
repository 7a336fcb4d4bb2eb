#pragma once

// De-randomisation statistics over shrinking balls: the arc partition of the
// circle, heavy arcs, normalised arc sums b_k(x), the midpoint approximant
// phi_x, C1 distances between local fields, and moment comparisons of both
// the b_k vector and |f| against complex-Gaussian targets.
//
// Arc convention: 2K arcs of angular width pi/K centred at the angles k*pi/K,
// k = 0..2K-1 (half-open, deterministic binning). Arc k + K is the antipode
// of arc k, so heavy sets are closed under conjugation for symmetric
// measures. Arc masses are circumference-normalised (each arc covers 1/(2K)
// of the circle); stored angles carry the factor 2*pi.

#include <complex>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "nodalab/bessel.hpp"
#include "nodalab/eigenfunctions.hpp"
#include "nodalab/gaussian_field.hpp"
#include "nodalab/geometry.hpp"
#include "nodalab/lattice.hpp"
#include "nodalab/rng.hpp"
#include "nodalab/stats.hpp"

namespace nodalab {

struct ArcPartition {
    int k_parameter = 0;

    explicit ArcPartition(int k) : k_parameter(k) {
        if (k < 1) throw std::invalid_argument("K must be >= 1");
    }
    int n_arcs() const { return 2 * k_parameter; }
    double arc_width() const { return M_PI / k_parameter; }
    double midpoint_angle(int k) const { return k * arc_width(); }
    Vec2 midpoint(int k) const {
        double a = midpoint_angle(k);
        return {std::cos(a), std::sin(a)};
    }
    int antipode(int k) const { return (k + k_parameter) % n_arcs(); }
    int arc_index(double angle) const {
        double w = arc_width();
        double shifted = angle + 0.5 * w;
        int k = static_cast<int>(std::floor(shifted / w));
        return ((k % n_arcs()) + n_arcs()) % n_arcs();
    }
};

// Mass the measure puts on each arc.
inline std::vector<double> arc_masses(const SpectralMeasure& measure, const ArcPartition& arcs) {
    std::vector<double> mass(arcs.n_arcs(), 0.0);
    if (measure.kind == SpectralMeasure::Kind::lebesgue) {
        for (double& m : mass) m = 1.0 / arcs.n_arcs();
        return mass;
    }
    for (const auto& a : measure.atoms) mass[arcs.arc_index(a.angle)] += a.mass;
    return mass;
}

// Indices of arcs carrying mass above delta.
inline std::vector<int> heavy_arcs(const SpectralMeasure& measure, int k_parameter, double delta) {
    if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
    ArcPartition arcs(k_parameter);
    auto mass = arc_masses(measure, arcs);
    std::vector<int> heavy;
    for (int k = 0; k < arcs.n_arcs(); ++k)
        if (mass[k] > delta) heavy.push_back(k);
    return heavy;
}

// b_k(x) = mu(I_k)^{-1/2} * sum over frequencies in arc k of a_xi e(<xi,x>).
// Conjugate arcs satisfy b_{k+K} = conj(b_k) exactly.
inline std::map<int, std::complex<double>> b_coefficients(const EigenfunctionSpec& spec,
                                                          const ArcPartition& arcs,
                                                          const std::vector<int>& kset, Vec2 x) {
    auto measure = spectral_measure(spec);
    auto mass = arc_masses(measure, arcs);
    std::map<int, std::complex<double>> b;
    for (int k : kset) {
        if (k < 0 || k >= arcs.n_arcs()) throw std::invalid_argument("arc index out of range");
        if (mass[k] <= 0.0) throw std::invalid_argument("requested arc carries no spectral mass");
        b[k] = {0.0, 0.0};
    }
    for (const auto& [f, a] : spec.coefficients) {
        int k = arcs.arc_index(frequency_angle(f));
        auto it = b.find(k);
        if (it == b.end()) continue;
        double phi = 2.0 * M_PI * (f.x * x.x + f.y * x.y);
        it->second += a * std::complex<double>{std::cos(phi), std::sin(phi)};
    }
    for (auto& [k, v] : b) v /= std::sqrt(mass[k]);
    return b;
}

// phi_x(y) = sum_{k in kset} mu(I_k)^{1/2} b_k(x) e(<R zeta_k, y>), real by
// conjugate pairing of antipodal arcs.
inline LocalField phi_approx(const EigenfunctionSpec& spec, const ArcPartition& arcs,
                             const std::vector<int>& kset, Vec2 x, double r_parameter) {
    auto measure = spectral_measure(spec);
    auto mass = arc_masses(measure, arcs);
    auto b = b_coefficients(spec, arcs, kset, x);
    auto waves = std::make_shared<std::vector<Wave>>();
    for (const auto& [k, bk] : b) {
        if (arcs.midpoint_angle(k) >= M_PI) continue;  // pair handled by representative
        if (b.find(arcs.antipode(k)) == b.end())
            throw std::invalid_argument("heavy arc set must be antipodally closed");
        std::complex<double> c = std::sqrt(mass[k]) * bk;
        Vec2 zeta = arcs.midpoint(k);
        waves->push_back({{r_parameter * zeta.x, r_parameter * zeta.y}, 2.0 * c.real(), -2.0 * c.imag()});
    }
    LocalField f;
    f.value = [waves](Vec2 y) { return waves_value(*waves, y); };
    f.grad = [waves](Vec2 y) { return waves_gradient(*waves, y); };
    return f;
}

// Discrete C1 distance on the unit disc: max over a probe grid of
// |A - B| + |grad A - grad B|.
inline double c1_distance(const LocalField& a, const LocalField& b, double probe_spacing) {
    if (probe_spacing <= 0.0 || probe_spacing > 1.0)
        throw std::invalid_argument("probe spacing must lie in (0, 1]");
    double worst = 0.0;
    int n = static_cast<int>(std::floor(1.0 / probe_spacing));
    for (int j = -n; j <= n; ++j) {
        for (int i = -n; i <= n; ++i) {
            Vec2 y{i * probe_spacing, j * probe_spacing};
            if (y.norm2() > 1.0) continue;
            double dv = std::fabs(a.value(y) - b.value(y));
            Vec2 dg = a.grad(y) - b.grad(y);
            worst = std::max(worst, dv + dg.norm());
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Moment tests.

struct ArcOrder {
    int arc = 0;
    int r = 0;  // power of b_k
    int s = 0;  // power of conj(b_k)
};

struct MomentTestReport {
    std::vector<ArcOrder> orders;
    std::complex<double> empirical;
    std::complex<double> gaussian;
    double deviation = 0.0;       // |empirical - gaussian|
    double standard_error = 0.0;  // Monte Carlo error of the empirical mean
    long long n_samples = 0;
};

inline unsigned long long factorial(int n) {
    unsigned long long f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<unsigned long long>(i);
    return f;
}

// Monte Carlo average of prod_k b_k^{r_k} conj(b_k)^{s_k} over x uniform in
// B(s,z), against the complex-Gaussian moment prod r_k! [r_k = s_k]. Tested
// arcs should be representatives (one arc per conjugate pair); the Gaussian
// side assumes the tested b_k are independent.
inline MomentTestReport moment_test_b(const EigenfunctionSpec& spec, const ArcPartition& arcs,
                                      const std::vector<ArcOrder>& orders, Vec2 z, double s,
                                      long long n_samples, std::uint64_t seed,
                                      int max_total_order = 8) {
    if (orders.empty()) throw std::invalid_argument("no arc orders requested");
    if (s <= 0.0) throw std::invalid_argument("ball radius must be positive");
    if (n_samples < 10000) throw std::invalid_argument("need at least 1e4 samples");
    int total_order = 0;
    std::vector<int> kset;
    for (const auto& o : orders) {
        total_order += o.r + o.s;
        kset.push_back(o.arc);
    }
    if (total_order > max_total_order)
        throw std::invalid_argument("total moment order exceeds the configured bound");

    Rng rng(seed);
    std::vector<std::complex<double>> samples(n_samples);
    for (long long i = 0; i < n_samples; ++i) {
        Vec2 x = rng.uniform_in_disc(z, s);
        auto b = b_coefficients(spec, arcs, kset, x);
        std::complex<double> prod{1.0, 0.0};
        for (const auto& o : orders) {
            std::complex<double> bk = b[o.arc];
            for (int p = 0; p < o.r; ++p) prod *= bk;
            std::complex<double> cb = std::conj(bk);
            for (int p = 0; p < o.s; ++p) prod *= cb;
        }
        samples[i] = prod;
    }

    MomentTestReport rep;
    rep.orders = orders;
    rep.n_samples = n_samples;
    rep.empirical = pairwise_mean(samples);
    std::complex<double> gauss{1.0, 0.0};
    for (const auto& o : orders) {
        if (o.r != o.s) {
            gauss = 0.0;
            break;
        }
        gauss *= static_cast<double>(factorial(o.r));
    }
    rep.gaussian = gauss;
    rep.deviation = std::abs(rep.empirical - rep.gaussian);
    std::vector<double> re(samples.size()), im(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        re[i] = samples[i].real();
        im[i] = samples[i].imag();
    }
    double se2 = standard_error(re) * standard_error(re) + standard_error(im) * standard_error(im);
    rep.standard_error = std::sqrt(se2);
    return rep;
}

// ---------------------------------------------------------------------------
// Ball moments of |f| by two independent routes.

struct FMomentRow {
    int l = 0;                     // moment order |f|^{2l}
    double quadrature = 0.0;       // route (i): grid quadrature over the ball
    double lattice_sum = 0.0;      // route (ii): exact Bessel-weighted lattice sum
    double gaussian_target = 0.0;  // (2l)!/(2^l l!)
    double constant_term = 0.0;    // zero-sum tuples contribution in route (ii)
    double oscillatory_term = 0.0; // remainder of route (ii)
    bool lattice_available = false;
};

struct FMomentReport {
    long long e = 0;
    double s = 0.0;
    Vec2 z;
    std::vector<FMomentRow> rows;
};

// Route (i): (pi s^2)^{-1} int_{B(s,z)} |f|^{2l} by quadrature with
// sub-sampled weights for cells straddling the disc boundary.
// Route (ii): expand |f|^{2l} into frequency-difference terms; zero-sum
// tuples contribute their coefficient product, the rest pick up the
// oscillatory disc average e(<D,z>) * 2 J1(2 pi s|D|)/(2 pi s|D|).
inline FMomentReport moment_test_f(const EigenfunctionSpec& spec, Vec2 z, double s, int max_l,
                                   double quad_cells = 512.0,
                                   double lattice_budget = 2e8) {
    if (s <= 0.0) throw std::invalid_argument("ball radius must be positive");
    if (max_l < 1 || max_l > 3) throw std::invalid_argument("max_l must be 1, 2 or 3");

    FMomentReport report;
    report.e = spec.e;
    report.s = s;
    report.z = z;

    // quadrature step: resolve both the ball and the oscillation
    double wavelength = 1.0 / std::sqrt(static_cast<double>(spec.e));
    double h = std::min(s / quad_cells, wavelength / 8.0);
    auto waves = spec_waves(spec);
    std::vector<double> moments(max_l + 1, 0.0);
    // one sweep computes every requested power
    {
        GridSpec grid = make_centered_grid(z, s, h, 1);
        SampledField f = sample_waves(waves, grid);
        const double r2 = s * s;
        double wsum = 0.0;
        std::vector<double> vsums(max_l + 1, 0.0);
        for (int j = 0; j < grid.ny; ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                Vec2 p = grid.point(i, j);
                double d = (p - z).norm();
                double w;
                if (d <= s - 0.7072 * h) {
                    w = 1.0;
                } else if (d >= s + 0.7072 * h) {
                    continue;
                } else {
                    int in = 0;
                    for (int a = 0; a < 32; ++a)
                        for (int c = 0; c < 32; ++c) {
                            Vec2 q{p.x + (a - 15.5) * h / 32.0, p.y + (c - 15.5) * h / 32.0};
                            if ((q - z).norm2() < r2) ++in;
                        }
                    if (in == 0) continue;
                    w = in / 1024.0;
                }
                double v = f.at(i, j);
                double v2 = v * v;
                wsum += w;
                double pow2l = 1.0;
                for (int l = 1; l <= max_l; ++l) {
                    pow2l *= v2;
                    vsums[l] += w * pow2l;
                }
            }
        }
        for (int l = 1; l <= max_l; ++l) moments[l] = vsums[l] / wsum;
    }

    const auto& coeffs = spec.coefficients;
    const std::size_t n = coeffs.size();

    for (int l = 1; l <= max_l; ++l) {
        FMomentRow row;
        row.l = l;
        row.quadrature = moments[l];
        row.gaussian_target = static_cast<double>(factorial(2 * l)) /
                              (std::pow(2.0, l) * static_cast<double>(factorial(l)));

        double work = std::pow(static_cast<double>(n), 2 * l);
        if (work <= lattice_budget) {
            // loop over (xi_1..xi_l, eta_1..eta_l); D = sum xi - sum eta
            std::complex<double> constant{0.0, 0.0}, oscillatory{0.0, 0.0};
            std::vector<std::size_t> idx(2 * l, 0);
            while (true) {
                std::complex<double> prod{1.0, 0.0};
                long long dx = 0, dy = 0;
                for (int t = 0; t < l; ++t) {
                    const auto& [f1, a1] = coeffs[idx[t]];
                    prod *= a1;
                    dx += f1.x;
                    dy += f1.y;
                }
                for (int t = l; t < 2 * l; ++t) {
                    const auto& [f2, a2] = coeffs[idx[t]];
                    prod *= std::conj(a2);
                    dx -= f2.x;
                    dy -= f2.y;
                }
                if (dx == 0 && dy == 0) {
                    constant += prod;
                } else {
                    double dn = std::sqrt(static_cast<double>(dx * dx + dy * dy));
                    double phase = 2.0 * M_PI * (dx * z.x + dy * z.y);
                    std::complex<double> osc{std::cos(phase), std::sin(phase)};
                    oscillatory += prod * osc * ball_fourier_factor(dn, s);
                }
                int d = 2 * l - 1;
                while (d >= 0 && ++idx[d] == n) idx[d--] = 0;
                if (d < 0) break;
            }
            row.constant_term = constant.real();
            row.oscillatory_term = oscillatory.real();
            row.lattice_sum = row.constant_term + row.oscillatory_term;
            row.lattice_available = true;
        }
        report.rows.push_back(row);
    }
    return report;
}

} // namespace nodalab
