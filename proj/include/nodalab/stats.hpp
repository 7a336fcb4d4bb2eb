#pragma once

// Order-independent reductions and small sample statistics. Pairwise
// summation keeps results identical no matter how work was distributed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace nodalab {

inline double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean of empty sample");
    return pairwise_sum(xs) / static_cast<double>(xs.size());
}

// Unbiased sample standard deviation.
inline double sample_std(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean(xs);
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - m) * (xs[i] - m);
    return std::sqrt(pairwise_sum(sq) / static_cast<double>(xs.size() - 1));
}

inline double standard_error(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return sample_std(xs) / std::sqrt(static_cast<double>(xs.size()));
}

inline double median(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("median of empty sample");
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    if (n % 2 == 1) return xs[n / 2];
    return 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

inline std::complex<double> pairwise_mean(std::span<const std::complex<double>> zs) {
    std::vector<double> re(zs.size()), im(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) {
        re[i] = zs[i].real();
        im[i] = zs[i].imag();
    }
    double n = static_cast<double>(zs.size());
    return {pairwise_sum(re) / n, pairwise_sum(im) / n};
}

} // namespace nodalab
