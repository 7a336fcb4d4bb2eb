#pragma once

// Exact arithmetic of lattice points on circles |xi|^2 = E: representations
// as sums of two squares, eigenspace multiplicity N(E), spectral correlations
// S(l,E) (ordered l-tuples of points summing to zero), and minimal nonzero
// l-fold sums (quasi-correlations). Everything here is exact integer work;
// doubles appear only in final norms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace nodalab {

// Integer lattice point; constructed only on circles |xi|^2 = E.
struct Frequency {
    long long x = 0;
    long long y = 0;

    friend bool operator==(const Frequency& a, const Frequency& b) = default;
    friend auto operator<=>(const Frequency& a, const Frequency& b) = default;
};

inline double frequency_angle(const Frequency& f) {
    double a = std::atan2(static_cast<double>(f.y), static_cast<double>(f.x));
    if (a < 0.0) a += 2.0 * M_PI;
    return a;
}

// Thrown when an enumeration would exceed the configured work ceiling.
class budget_error : public std::runtime_error {
public:
    budget_error(double estimated_ops, double budget)
        : std::runtime_error("work budget exceeded: estimated " + std::to_string(estimated_ops) +
                             " ops > budget " + std::to_string(budget)),
          estimated_ops(estimated_ops),
          budget(budget) {}
    double estimated_ops;
    double budget;
};

inline constexpr double default_work_budget = 1e9;
inline constexpr long long max_supported_e = 100000000;  // trial division stays cheap

inline long long isqrt_ll(long long n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative number");
    long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Trial-division factorisation, ascending primes.
inline std::vector<std::pair<long long, int>> factorize(long long n) {
    if (n < 1) throw std::invalid_argument("factorize requires n >= 1");
    if (n > max_supported_e) throw std::invalid_argument("n exceeds supported maximum");
    std::vector<std::pair<long long, int>> fs;
    for (long long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        fs.emplace_back(p, e);
    }
    if (n > 1) fs.emplace_back(n, 1);
    return fs;
}

// n is a sum of two squares iff every prime q = 3 (mod 4) divides n to an
// even power.
inline bool is_sum_of_two_squares(long long n) {
    for (auto [p, e] : factorize(n))
        if (p % 4 == 3 && e % 2 == 1) return false;
    return true;
}

// All xi in Z^2 with |xi|^2 = E, sorted by ascending angle in [0, 2*pi).
inline std::vector<Frequency> lattice_points(long long e) {
    if (e < 1) throw std::invalid_argument("lattice_points requires E >= 1");
    std::vector<Frequency> pts;
    long long r = isqrt_ll(e);
    for (long long a = -r; a <= r; ++a) {
        long long b2 = e - a * a;
        long long b = isqrt_ll(b2);
        if (b * b != b2) continue;
        pts.push_back({a, b});
        if (b != 0) pts.push_back({a, -b});
    }
    std::sort(pts.begin(), pts.end(), [](const Frequency& u, const Frequency& v) {
        return frequency_angle(u) < frequency_angle(v);
    });
    return pts;
}

// N(E) from the factorisation: 4 * prod (alpha_p + 1) over p = 1 (mod 4),
// and 0 when E is not a sum of two squares.
inline long long multiplicity_from_factorization(long long e) {
    long long n = 4;
    for (auto [p, ex] : factorize(e)) {
        if (p % 4 == 3) {
            if (ex % 2 == 1) return 0;
        } else if (p % 4 == 1) {
            n *= (ex + 1);
        }
    }
    return n;
}

inline long long multiplicity(long long e) { return multiplicity_from_factorization(e); }

enum class CorrelationMethod { exhaustive, meet_in_middle };

struct CorrelationReport {
    long long e = 0;
    int tuple_len = 0;
    unsigned long long total_solutions = 0;
    unsigned long long diagonal_solutions = 0;
    unsigned long long off_diagonal_solutions = 0;
    unsigned long long predicted_diagonal = 0;  // (2l)!/(2^l l!) * N^l, 2l = tuple_len
};

// Ordered tuples whose multiset is a union of antipodal pairs {xi, -xi}.
// The decomposition of such a multiset into pairs is unique, so counting
// multisets of pairs times their orderings counts each tuple once.
inline unsigned long long diagonal_count(int tuple_len, long long n_points) {
    unsigned long long m = static_cast<unsigned long long>(n_points / 2);  // antipodal pairs
    switch (tuple_len) {
        case 2:
            return 2 * m;
        case 4:
            // distinct pairs {P,Q}: 4! orderings; doubled pair {P,P}: 4!/(2!2!)
            return 24 * (m * (m - 1) / 2) + 6 * m;
        case 6:
            // {P,Q,R}: 6!; {P,P,Q}: 6!/(2!2!); {P,P,P}: 6!/(3!3!)
            return 720 * (m * (m - 1) * (m - 2) / 6) + 180 * (m * (m - 1)) + 20 * m;
        default:
            throw std::invalid_argument("diagonal_count supports tuple lengths 2, 4, 6");
    }
}

// Leading term of the correlation count: (2l)!/(2^l l!) * N^l with 2l the
// tuple length.
inline unsigned long long predicted_diagonal_count(int tuple_len, long long n_points) {
    if (tuple_len % 2 == 1) return 0;
    int l = tuple_len / 2;
    unsigned long long coef = 1;
    for (int i = 2 * l; i > l; --i) coef *= static_cast<unsigned long long>(i);  // (2l)!/l!
    for (int i = 0; i < l; ++i) coef /= 2;
    unsigned long long npow = 1;
    for (int i = 0; i < l; ++i) npow *= static_cast<unsigned long long>(n_points);
    return coef * npow;
}

namespace detail {

inline std::uint64_t pack_point(long long x, long long y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(static_cast<std::int32_t>(x))) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(static_cast<std::int32_t>(y)));
}

// Sums of all ordered `half`-tuples, with multiplicities.
inline std::unordered_map<std::uint64_t, unsigned long long> half_sum_counts(
    const std::vector<Frequency>& pts, int half) {
    std::unordered_map<std::uint64_t, unsigned long long> counts;
    counts.reserve(pts.size() * pts.size());
    if (half == 1) {
        for (const auto& p : pts) ++counts[pack_point(p.x, p.y)];
    } else if (half == 2) {
        for (const auto& p : pts)
            for (const auto& q : pts) ++counts[pack_point(p.x + q.x, p.y + q.y)];
    } else if (half == 3) {
        for (const auto& p : pts)
            for (const auto& q : pts)
                for (const auto& r : pts) ++counts[pack_point(p.x + q.x + r.x, p.y + q.y + r.y)];
    } else {
        throw std::invalid_argument("half-tuple length must be 1, 2 or 3");
    }
    return counts;
}

inline bool multiset_is_antipodal(std::vector<Frequency> tuple) {
    std::sort(tuple.begin(), tuple.end());
    std::map<Frequency, long long> mult;
    for (const auto& f : tuple) ++mult[f];
    for (const auto& [f, m] : mult) {
        auto it = mult.find(Frequency{-f.x, -f.y});
        if (it == mult.end() || it->second != m) return false;
    }
    return true;
}

} // namespace detail

// Counts ordered tuples (xi_1, ..., xi_l) of lattice points with zero sum.
// Odd lengths short-circuit to zero (congruence obstruction mod 2). The two
// methods must agree exactly; the exhaustive one classifies diagonal tuples
// one by one, meet-in-the-middle uses the closed-form diagonal count.
inline CorrelationReport spectral_correlations(long long e, int tuple_len, CorrelationMethod method,
                                               double work_budget = default_work_budget) {
    if (tuple_len != 2 && tuple_len != 3 && tuple_len != 4 && tuple_len != 6)
        throw std::invalid_argument("tuple length must be one of 2, 3, 4, 6");
    const auto pts = lattice_points(e);
    const long long n = static_cast<long long>(pts.size());

    CorrelationReport rep;
    rep.e = e;
    rep.tuple_len = tuple_len;
    if (tuple_len % 2 == 1) {
        rep.predicted_diagonal = 0;
        return rep;  // congruence obstruction mod 2: odd tuples never sum to zero
    }
    rep.predicted_diagonal = predicted_diagonal_count(tuple_len, n);
    if (n == 0) return rep;

    if (method == CorrelationMethod::exhaustive) {
        double est = std::pow(static_cast<double>(n), tuple_len - 1);
        if (est > work_budget) throw budget_error(est, work_budget);
        std::unordered_set<std::uint64_t> point_set;
        for (const auto& p : pts) point_set.insert(detail::pack_point(p.x, p.y));

        std::vector<int> idx(tuple_len - 1, 0);
        std::vector<Frequency> tuple(tuple_len);
        while (true) {
            long long sx = 0, sy = 0;
            for (int d = 0; d < tuple_len - 1; ++d) {
                tuple[d] = pts[idx[d]];
                sx += tuple[d].x;
                sy += tuple[d].y;
            }
            if (point_set.count(detail::pack_point(-sx, -sy))) {
                ++rep.total_solutions;
                tuple[tuple_len - 1] = {-sx, -sy};
                if (detail::multiset_is_antipodal(tuple)) ++rep.diagonal_solutions;
            }
            int d = tuple_len - 2;
            while (d >= 0 && ++idx[d] == n) idx[d--] = 0;
            if (d < 0) break;
        }
    } else {
        int half = tuple_len / 2;
        double est = std::pow(static_cast<double>(n), half) * 4.0;
        if (est > work_budget) throw budget_error(est, work_budget);
        auto counts = detail::half_sum_counts(pts, half);
        for (const auto& [key, cnt] : counts) {
            long long x = static_cast<std::int32_t>(key >> 32);
            long long y = static_cast<std::int32_t>(key & 0xffffffffull);
            auto it = counts.find(detail::pack_point(-x, -y));
            if (it != counts.end()) rep.total_solutions += cnt * it->second;
        }
        rep.diagonal_solutions = diagonal_count(tuple_len, n);
    }
    rep.off_diagonal_solutions = rep.total_solutions - rep.diagonal_solutions;
    return rep;
}

struct QuasiCorrelationReport {
    long long e = 0;
    int tuple_len = 0;
    long long min_norm2 = 0;          // exact squared norm of the minimal nonzero sum
    double min_nonzero_norm = 0.0;    // sqrt(min_norm2)
    std::vector<Frequency> attaining_tuple;
};

namespace detail {

// Half-sum vector with one representative half-tuple.
struct HalfSum {
    long long x, y;
    std::vector<Frequency> rep;
};

inline std::vector<HalfSum> half_sums_with_reps(const std::vector<Frequency>& pts, int half) {
    std::unordered_map<std::uint64_t, std::size_t> seen;
    std::vector<HalfSum> sums;
    auto visit = [&](long long sx, long long sy, const std::vector<Frequency>& tuple) {
        std::uint64_t key = pack_point(sx, sy);
        if (seen.emplace(key, sums.size()).second) sums.push_back({sx, sy, tuple});
    };
    std::vector<Frequency> t;
    if (half == 1) {
        for (const auto& p : pts) visit(p.x, p.y, {p});
    } else if (half == 2) {
        for (const auto& p : pts)
            for (const auto& q : pts) visit(p.x + q.x, p.y + q.y, {p, q});
    } else if (half == 3) {
        for (const auto& p : pts)
            for (const auto& q : pts)
                for (const auto& r : pts) visit(p.x + q.x + r.x, p.y + q.y + r.y, {p, q, r});
    } else {
        throw std::invalid_argument("half-tuple length must be 1, 2 or 3");
    }
    return sums;
}

} // namespace detail

// Minimal Euclidean norm over all ordered `tuple_len`-tuples with nonzero
// sum, via a meet-in-the-middle nearest-opposite search over half-sums
// bucketed on a coarse integer grid.
inline QuasiCorrelationReport min_quasi_correlation(long long e, int tuple_len,
                                                    double work_budget = default_work_budget) {
    if (tuple_len != 2 && tuple_len != 4 && tuple_len != 6)
        throw std::invalid_argument("tuple length must be one of 2, 4, 6");
    const auto pts = lattice_points(e);
    if (pts.empty()) throw std::invalid_argument("E is not a sum of two squares");
    const long long n = static_cast<long long>(pts.size());
    const int half = tuple_len / 2;
    double est = std::pow(static_cast<double>(n), half) * 64.0;
    if (est > work_budget) throw budget_error(est, work_budget);

    auto sums = detail::half_sums_with_reps(pts, half);

    // Spatial hash over half-sum vectors.
    const long long cell = std::max<long long>(1, isqrt_ll(e) / 2);
    auto cell_key = [cell](long long x, long long y) {
        auto fdiv = [](long long a, long long b) {
            long long q = a / b;
            return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
        };
        return detail::pack_point(fdiv(x, cell), fdiv(y, cell));
    };
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
    buckets.reserve(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i) buckets[cell_key(sums[i].x, sums[i].y)].push_back(i);

    long long best_norm2 = -1;
    std::size_t best_a = 0, best_b = 0;

    auto consider = [&](std::size_t ia, std::size_t ib) {
        long long sx = sums[ia].x + sums[ib].x;
        long long sy = sums[ia].y + sums[ib].y;
        long long norm2 = sx * sx + sy * sy;
        if (norm2 == 0) return;
        if (best_norm2 < 0 || norm2 < best_norm2 ||
            (norm2 == best_norm2 && std::pair(ia, ib) < std::pair(best_a, best_b))) {
            best_norm2 = norm2;
            best_a = ia;
            best_b = ib;
        }
    };

    auto fdiv = [](long long a, long long b) {
        long long q = a / b;
        return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
    };
    // Any half-sum has coordinates bounded by half*sqrt(E); a ring beyond
    // twice that (in cells) cannot contain an occupied bucket.
    const long long ring_limit = 2 * (half * isqrt_ll(e) / cell + 2);
    for (std::size_t ia = 0; ia < sums.size(); ++ia) {
        const long long tx = -sums[ia].x, ty = -sums[ia].y;  // nearest-opposite target
        const long long ci = fdiv(tx, cell), cj = fdiv(ty, cell);
        for (long long ring = 0; ring <= ring_limit; ++ring) {
            // A point in a ring-r cell lies at distance >= (r-1)*cell from the
            // target, so once a candidate is held further rings cannot improve.
            if (best_norm2 >= 0 && ring > 1) {
                double ring_min = (static_cast<double>(ring) - 1.0) * static_cast<double>(cell);
                if (ring_min * ring_min > static_cast<double>(best_norm2)) break;
            }
            for (long long di = -ring; di <= ring; ++di) {
                for (long long dj = -ring; dj <= ring; ++dj) {
                    if (std::max(std::llabs(di), std::llabs(dj)) != ring) continue;
                    auto it = buckets.find(detail::pack_point(ci + di, cj + dj));
                    if (it == buckets.end()) continue;
                    for (std::size_t ib : it->second) consider(ia, ib);
                }
            }
        }
    }

    // (xi, xi, ...) always has nonzero sum, so a minimum exists.
    if (best_norm2 < 0) throw std::logic_error("no nonzero tuple sum found");

    QuasiCorrelationReport rep;
    rep.e = e;
    rep.tuple_len = tuple_len;
    rep.min_norm2 = best_norm2;
    rep.min_nonzero_norm = std::sqrt(static_cast<double>(best_norm2));
    rep.attaining_tuple = sums[best_a].rep;
    rep.attaining_tuple.insert(rep.attaining_tuple.end(), sums[best_b].rep.begin(),
                               sums[best_b].rep.end());
    return rep;
}

// Measured quantities behind the density-one arithmetic hypotheses: excess of
// correlations over the diagonal prediction in units of N^(gamma*l), minimal
// quasi-correlation norms in units of E^scale_exponent, and the divisor-bound
// ratio. Reported, never judged: these are asymptotic statements.
struct SPrimeRow {
    int half_len = 0;  // l, for tuple length 2l
    unsigned long long total = 0;
    unsigned long long predicted = 0;      // leading term (2l)!/(2^l l!) N^l
    double excess_ratio = 0.0;             // off-diagonal solutions / N^(gamma*l)
    double leading_term_ratio = 0.0;       // |total - predicted| / N^(gamma*l)
    double min_quasi_norm = 0.0;
    double quasi_ratio = 0.0;
};

struct SPrimeDiagnostic {
    long long e = 0;
    long long n = 0;
    double divisor_bound_ratio = 0.0;  // N(E) / exp(log E / log log E)
    double gamma = 0.0;
    double scale_exponent = 0.0;
    std::vector<SPrimeRow> rows;
};

inline SPrimeDiagnostic s_prime_diagnostic(long long e, int max_half_len, double gamma,
                                           double scale_exponent,
                                           double work_budget = default_work_budget) {
    if (!is_sum_of_two_squares(e)) throw std::invalid_argument("E is not a sum of two squares");
    if (gamma <= 0.0 || gamma >= 1.0) throw std::invalid_argument("gamma must lie in (0,1)");
    SPrimeDiagnostic d;
    d.e = e;
    d.n = multiplicity(e);
    d.gamma = gamma;
    d.scale_exponent = scale_exponent;
    double loge = std::log(static_cast<double>(e));
    d.divisor_bound_ratio = e > 2 ? static_cast<double>(d.n) / std::exp(loge / std::log(loge))
                                  : static_cast<double>(d.n);
    for (int l = 1; l <= max_half_len; ++l) {
        int len = 2 * l;
        if (len != 2 && len != 4 && len != 6) break;
        SPrimeRow row;
        row.half_len = l;
        auto corr = spectral_correlations(e, len, CorrelationMethod::meet_in_middle, work_budget);
        row.total = corr.total_solutions;
        row.predicted = corr.predicted_diagonal;
        double denom = std::pow(static_cast<double>(d.n), gamma * l);
        row.excess_ratio = static_cast<double>(corr.off_diagonal_solutions) / denom;
        row.leading_term_ratio = std::fabs(static_cast<double>(corr.total_solutions) -
                                           static_cast<double>(corr.predicted_diagonal)) /
                                 denom;
        auto quasi = min_quasi_correlation(e, len, work_budget);
        row.min_quasi_norm = quasi.min_nonzero_norm;
        row.quasi_ratio = quasi.min_nonzero_norm / std::pow(static_cast<double>(e), scale_exponent);
        d.rows.push_back(row);
    }
    return d;
}

} // namespace nodalab
