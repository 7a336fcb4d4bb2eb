#include <catch2/catch.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <unordered_set>

#include "nodalab/lattice.hpp"

using namespace nodalab;

namespace {

// Brute-force oracles, kept independent of the library implementations.

bool oracle_sum_of_two_squares(long long n) {
    for (long long a = 0; a * a <= n; ++a) {
        long long b2 = n - a * a;
        long long b = isqrt_ll(b2);
        if (b * b == b2) return true;
    }
    return false;
}

std::set<std::pair<long long, long long>> oracle_lattice_points(long long e) {
    std::set<std::pair<long long, long long>> pts;
    long long r = isqrt_ll(e) + 1;
    for (long long a = -r; a <= r; ++a)
        for (long long b = -r; b <= r; ++b)
            if (a * a + b * b == e) pts.insert({a, b});
    return pts;
}

// Plain nested enumeration of zero-sum tuples, with per-tuple diagonal
// classification (multiset is a union of antipodal pairs).
struct OracleCorrelations {
    unsigned long long total = 0;
    unsigned long long diagonal = 0;
};

bool oracle_is_diagonal(std::vector<Frequency> tuple) {
    std::map<std::pair<long long, long long>, int> mult;
    for (const auto& f : tuple) ++mult[{f.x, f.y}];
    for (const auto& [xy, m] : mult) {
        auto it = mult.find({-xy.first, -xy.second});
        if (it == mult.end() || it->second != m) return false;
    }
    return true;
}

OracleCorrelations oracle_correlations(long long e, int len) {
    auto pts = lattice_points(e);
    const int n = static_cast<int>(pts.size());
    OracleCorrelations out;
    std::vector<int> idx(len, 0);
    if (n == 0) return out;
    while (true) {
        long long sx = 0, sy = 0;
        for (int d = 0; d < len; ++d) {
            sx += pts[idx[d]].x;
            sy += pts[idx[d]].y;
        }
        if (sx == 0 && sy == 0) {
            ++out.total;
            std::vector<Frequency> tuple;
            for (int d = 0; d < len; ++d) tuple.push_back(pts[idx[d]]);
            if (oracle_is_diagonal(tuple)) ++out.diagonal;
        }
        int d = len - 1;
        while (d >= 0 && ++idx[d] == n) idx[d--] = 0;
        if (d < 0) break;
    }
    return out;
}

// Exhaustive minimal nonzero l-fold sum.
long long oracle_min_quasi_norm2(long long e, int len) {
    auto pts = lattice_points(e);
    const int n = static_cast<int>(pts.size());
    long long best = -1;
    std::vector<int> idx(len, 0);
    while (true) {
        long long sx = 0, sy = 0;
        for (int d = 0; d < len; ++d) {
            sx += pts[idx[d]].x;
            sy += pts[idx[d]].y;
        }
        long long norm2 = sx * sx + sy * sy;
        if (norm2 > 0 && (best < 0 || norm2 < best)) best = norm2;
        int d = len - 1;
        while (d >= 0 && ++idx[d] == n) idx[d--] = 0;
        if (d < 0) break;
    }
    return best;
}

std::vector<long long> members_of_s(long long limit) {
    std::vector<long long> es;
    for (long long e = 1; e <= limit; ++e)
        if (is_sum_of_two_squares(e)) es.push_back(e);
    return es;
}

} // namespace

TEST_CASE("sum of two squares decision", "[lattice]") {
    CHECK(is_sum_of_two_squares(1));
    CHECK_FALSE(is_sum_of_two_squares(3));
    CHECK(is_sum_of_two_squares(25));
    for (long long n = 1; n <= 500; ++n)
        CHECK(is_sum_of_two_squares(n) == oracle_sum_of_two_squares(n));
}

TEST_CASE("lattice point enumeration", "[lattice]") {
    SECTION("E=1 axis points") {
        auto pts = lattice_points(1);
        REQUIRE(pts.size() == 4);
        std::set<std::pair<long long, long long>> got;
        for (const auto& p : pts) got.insert({p.x, p.y});
        CHECK(got == std::set<std::pair<long long, long long>>{{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
    }
    SECTION("E=5 contains both orientations") {
        auto pts = lattice_points(5);
        REQUIRE(pts.size() == 8);
        std::set<std::pair<long long, long long>> got;
        for (const auto& p : pts) got.insert({p.x, p.y});
        CHECK(got.count({1, 2}) == 1);
        CHECK(got.count({2, 1}) == 1);
        CHECK(got == oracle_lattice_points(5));
    }
    SECTION("E=3 empty") { CHECK(lattice_points(3).empty()); }
    SECTION("angle-sorted ascending") {
        auto pts = lattice_points(325);
        for (std::size_t i = 1; i < pts.size(); ++i)
            CHECK(frequency_angle(pts[i - 1]) < frequency_angle(pts[i]));
    }
    SECTION("oracle agreement over small E") {
        for (long long e = 1; e <= 200; ++e) {
            auto pts = lattice_points(e);
            std::set<std::pair<long long, long long>> got;
            for (const auto& p : pts) got.insert({p.x, p.y});
            CHECK(got == oracle_lattice_points(e));
        }
    }
}

TEST_CASE("multiplicity equals enumeration and factorisation formula", "[lattice]") {
    CHECK(multiplicity(1) == 4);
    CHECK(multiplicity(25) == 12);
    CHECK(multiplicity(5525) == 48);
    // spec invariant: formula vs enumeration for all E in S up to 1e4
    for (long long e = 1; e <= 10000; ++e) {
        long long n_enum = static_cast<long long>(lattice_points(e).size());
        CHECK(n_enum == multiplicity_from_factorization(e));
    }
}

TEST_CASE("spectral correlations basic identities", "[lattice]") {
    SECTION("S(2,E) = N exactly") {
        for (long long e : members_of_s(300)) {
            auto rep = spectral_correlations(e, 2, CorrelationMethod::meet_in_middle);
            CHECK(rep.total_solutions == static_cast<unsigned long long>(multiplicity(e)));
            CHECK(rep.diagonal_solutions == rep.total_solutions);
            CHECK(rep.off_diagonal_solutions == 0);
        }
    }
    SECTION("odd tuples vanish: parity shortcut and exhaustive spot check") {
        for (long long e : members_of_s(100)) {
            auto rep = spectral_correlations(e, 3, CorrelationMethod::exhaustive);
            CHECK(rep.total_solutions == 0);
            CHECK(oracle_correlations(e, 3).total == 0);
        }
    }
    SECTION("E=5 fixtures") {
        auto rep2 = spectral_correlations(5, 2, CorrelationMethod::exhaustive);
        CHECK(rep2.total_solutions == 8);
        auto rep4 = spectral_correlations(5, 4, CorrelationMethod::exhaustive);
        auto oracle = oracle_correlations(5, 4);
        CHECK(rep4.total_solutions == oracle.total);
        CHECK(rep4.diagonal_solutions == oracle.total);  // only diagonal solutions at E=5
        CHECK(rep4.predicted_diagonal == 3ull * 8 * 8);
    }
}

TEST_CASE("correlation methods agree and match the oracle", "[lattice]") {
    for (long long e : {1LL, 2LL, 5LL, 25LL, 50LL, 65LL, 325LL}) {
        auto ex = spectral_correlations(e, 4, CorrelationMethod::exhaustive);
        auto mm = spectral_correlations(e, 4, CorrelationMethod::meet_in_middle);
        auto oracle = oracle_correlations(e, 4);
        CHECK(ex.total_solutions == oracle.total);
        CHECK(mm.total_solutions == oracle.total);
        CHECK(ex.diagonal_solutions == oracle.diagonal);
        CHECK(mm.diagonal_solutions == oracle.diagonal);
    }
}

TEST_CASE("diagonal closed form matches per-tuple classification", "[lattice]") {
    for (long long e : {1LL, 2LL, 5LL, 10LL, 25LL, 65LL}) {
        long long n = multiplicity(e);
        CHECK(diagonal_count(4, n) == oracle_correlations(e, 4).diagonal);
    }
    // length 6 on the two smallest circles
    CHECK(diagonal_count(6, 4) == oracle_correlations(1, 6).diagonal);
    CHECK(diagonal_count(6, 4) == oracle_correlations(2, 6).diagonal);
}

TEST_CASE("minimal quasi-correlations", "[lattice]") {
    SECTION("E=1: minimal nonzero pair sum is sqrt(2)") {
        auto rep = min_quasi_correlation(1, 2);
        CHECK(rep.min_norm2 == oracle_min_quasi_norm2(1, 2));
        CHECK(rep.min_norm2 == 2);
        CHECK(rep.min_nonzero_norm == Approx(std::sqrt(2.0)));
    }
    SECTION("E=5: sqrt(2) via opposite-ish neighbours") {
        auto rep = min_quasi_correlation(5, 2);
        CHECK(rep.min_norm2 == 2);
        CHECK(rep.min_norm2 == oracle_min_quasi_norm2(5, 2));
    }
    SECTION("re-summing the attaining tuple reproduces the norm exactly") {
        for (long long e : {5LL, 25LL, 65LL, 325LL}) {
            for (int len : {2, 4}) {
                auto rep = min_quasi_correlation(e, len);
                REQUIRE(rep.attaining_tuple.size() == static_cast<std::size_t>(len));
                long long sx = 0, sy = 0;
                for (const auto& f : rep.attaining_tuple) {
                    CHECK(f.x * f.x + f.y * f.y == e);
                    sx += f.x;
                    sy += f.y;
                }
                CHECK(sx * sx + sy * sy == rep.min_norm2);
                CHECK(rep.min_nonzero_norm ==
                      std::sqrt(static_cast<double>(rep.min_norm2)));
            }
        }
    }
    SECTION("oracle agreement at length 4") {
        for (long long e : {1LL, 5LL, 25LL, 65LL, 85LL}) {
            auto rep = min_quasi_correlation(e, 4);
            CHECK(rep.min_norm2 == oracle_min_quasi_norm2(e, 4));
        }
    }
    SECTION("invariant under the 8-fold lattice symmetry") {
        auto base = min_quasi_correlation(325, 4).min_norm2;
        // negation/swap symmetries map the point set to itself, so the
        // minimum is unchanged; re-run on E and compare against the same E
        // after applying the symmetry to the attaining tuple by hand.
        auto rep = min_quasi_correlation(325, 4);
        long long sx = 0, sy = 0;
        for (const auto& f : rep.attaining_tuple) {
            sx += f.y;  // swap axes
            sy += f.x;
        }
        CHECK(sx * sx + sy * sy == base);
        sx = sy = 0;
        for (const auto& f : rep.attaining_tuple) {
            sx += -f.x;  // negate x
            sy += f.y;
        }
        CHECK(sx * sx + sy * sy == base);
    }
}

TEST_CASE("budget errors carry the estimate", "[lattice]") {
    CHECK_THROWS_AS(spectral_correlations(5525, 6, CorrelationMethod::exhaustive, 1e6),
                    budget_error);
    try {
        spectral_correlations(5525, 6, CorrelationMethod::exhaustive, 1e6);
    } catch (const budget_error& err) {
        CHECK(err.estimated_ops > 1e6);
        CHECK(err.budget == 1e6);
    }
    CHECK_THROWS_AS(min_quasi_correlation(5525, 6, 1e3), budget_error);
}

TEST_CASE("s-prime diagnostic rows", "[lattice]") {
    SECTION("E=5: no off-diagonal excess for l = 1, 2") {
        auto d = s_prime_diagnostic(5, 2, 0.5, 0.5);
        REQUIRE(d.rows.size() == 2);
        CHECK(d.rows[0].excess_ratio == 0.0);
        CHECK(d.rows[1].excess_ratio == 0.0);  // S(4,5) is purely diagonal
        // the leading-term deviation is the lower-order 3N gap, 3N/N = 3
        CHECK(d.rows[1].leading_term_ratio == Approx(3.0));
        CHECK(d.n == 8);
    }
    SECTION("E=25: l=1 row is exact") {
        auto d = s_prime_diagnostic(25, 1, 0.5, 0.5);
        REQUIRE(d.rows.size() == 1);
        CHECK(d.rows[0].total == 12);
        CHECK(d.rows[0].predicted == 12);
        CHECK(d.rows[0].excess_ratio == 0.0);
    }
    SECTION("rejects E outside S and bad gamma") {
        CHECK_THROWS_AS(s_prime_diagnostic(3, 1, 0.5, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(s_prime_diagnostic(5, 1, 1.5, 0.5), std::invalid_argument);
    }
}
