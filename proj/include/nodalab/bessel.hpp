#pragma once

// Bessel functions J0, J1: ascending power series up to x = 12, Hankel
// asymptotic expansion beyond. Absolute error <= 1e-10 on [0,12], relative
// <= 1e-8 for larger arguments.

#include <cmath>
#include <stdexcept>

namespace nodalab {

namespace detail {

inline double bessel_series_j0(double x) {
    double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int m = 1; m <= 60; ++m) {
        term *= -q / (static_cast<double>(m) * m);
        sum += term;
        if (std::fabs(term) < 1e-18) break;
    }
    return sum;
}

inline double bessel_series_j1(double x) {
    double q = 0.25 * x * x;
    double term = 0.5 * x, sum = term;
    for (int m = 1; m <= 60; ++m) {
        term *= -q / (static_cast<double>(m) * (m + 1.0));
        sum += term;
        if (std::fabs(term) < 1e-18) break;
    }
    return sum;
}

// J_n(x) ~ sqrt(2/(pi x)) [P cos(w) - Q sin(w)], w = x - n pi/2 - pi/4,
// with P, Q the first terms of the Hankel series in 1/(8x).
inline double bessel_asymptotic(int n, double x) {
    const double mu = 4.0 * n * n;
    double a = 1.0;      // running Hankel coefficient a_k / x^k
    double p = 1.0, q = 0.0;
    for (int k = 1; k <= 10; ++k) {
        double odd = 2.0 * k - 1.0;
        a *= (mu - odd * odd) / (8.0 * k * x);
        if (k % 2 == 1) {
            q += (k % 4 == 1) ? a : -a;
        } else {
            p += (k % 4 == 2) ? -a : a;
        }
        if (std::fabs(a) < 1e-17) break;
    }
    double w = x - 0.5 * n * M_PI - 0.25 * M_PI;
    return std::sqrt(2.0 / (M_PI * x)) * (p * std::cos(w) - q * std::sin(w));
}

} // namespace detail

inline double bessel_j(int order, double x) {
    if (order != 0 && order != 1) throw std::invalid_argument("bessel_j supports orders 0 and 1");
    if (x < 0.0) throw std::invalid_argument("bessel_j requires x >= 0");
    if (x <= 12.0) return order == 0 ? detail::bessel_series_j0(x) : detail::bessel_series_j1(x);
    return detail::bessel_asymptotic(order, x);
}

inline double bessel_j0(double x) { return bessel_j(0, x); }
inline double bessel_j1(double x) { return bessel_j(1, x); }

// Normalised mean of e(<a,x>) over a disc of radius s:
//   (1/(pi s^2)) integral_{B(s)} e(2 pi i <a,x>) dx = 2 J1(2 pi s|a|)/(2 pi s|a|),
// equal to 1 at a = 0.
inline double ball_fourier_factor(double a_norm, double s) {
    if (s <= 0.0) throw std::invalid_argument("ball_fourier_factor requires s > 0");
    if (a_norm < 0.0) throw std::invalid_argument("ball_fourier_factor requires a_norm >= 0");
    double t = 2.0 * M_PI * s * a_norm;
    if (t == 0.0) return 1.0;
    if (t < 1e-6) return 1.0 - t * t / 8.0;  // series limit, avoids 0/0
    return 2.0 * bessel_j1(t) / t;
}

} // namespace nodalab
