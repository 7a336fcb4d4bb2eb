#include <catch2/catch.hpp>

#include <sstream>

#include "nodalab/field_io.hpp"
#include "nodalab/gaussian_field.hpp"
#include "nodalab/io.hpp"
#include "nodalab/rng.hpp"
#include "nodalab/stats.hpp"

using namespace nodalab;

TEST_CASE("rng streams are deterministic and decoupled", "[io]") {
    Rng a = Rng::stream(42, 7);
    Rng b = Rng::stream(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    // neighbouring streams differ immediately
    Rng c = Rng::stream(42, 8);
    CHECK(Rng::stream(42, 7).next_u64() != c.next_u64());
}

TEST_CASE("uniform and gaussian draws look right", "[io]") {
    Rng rng(5);
    const int n = 200000;
    std::vector<double> g(n);
    double umin = 1.0, umax = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform01();
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        g[i] = rng.gaussian();
    }
    CHECK(umin >= 0.0);
    CHECK(umax < 1.0);
    CHECK(std::fabs(mean(g)) < 0.01);
    CHECK(sample_std(g) == Approx(1.0).margin(0.01));
    // disc sampling stays strictly inside
    for (int i = 0; i < 1000; ++i) {
        Vec2 p = rng.uniform_in_disc({1.0, -2.0}, 0.5);
        CHECK((p - Vec2{1.0, -2.0}).norm() < 0.5);
    }
}

TEST_CASE("pairwise sums are order-robust", "[io]") {
    Rng rng(9);
    std::vector<double> xs(10001);
    for (auto& x : xs) x = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-6.0, 6.0));
    double direct = pairwise_sum(xs);
    std::vector<double> reversed(xs.rbegin(), xs.rend());
    CHECK(pairwise_sum(reversed) == Approx(direct).margin(1e-10 * std::fabs(direct) + 1e-10));
}

TEST_CASE("seventeen-digit doubles round-trip exactly", "[io]") {
    Rng rng(13);
    for (int i = 0; i < 1000; ++i) {
        double v = rng.gaussian() * std::pow(10.0, rng.uniform(-12.0, 12.0));
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(parse_double(format_double(0.1)) == 0.1);
    CHECK_THROWS_AS(parse_double("1.5x"), std::invalid_argument);
}

TEST_CASE("csv rows quote what needs quoting", "[io]") {
    CHECK(csv_row({"a", "b"}) == "a,b\n");
    CHECK(csv_row({"a,b", "c\"d"}) == "\"a,b\",\"c\"\"d\"\n");
}

TEST_CASE("field serialisation round-trips exactly", "[io]") {
    auto f = sample_field(measure_nu(), 1, Region::disc({0.0, 0.0}, 1.5), 1.0 / 12.0, 3, true);
    std::stringstream ss;
    write_field(f, ss);
    auto back = read_field(ss);
    CHECK(back.grid.nx == f.grid.nx);
    CHECK(back.grid.ny == f.grid.ny);
    CHECK(back.grid.spacing == f.grid.spacing);
    CHECK(back.grid.origin.x == f.grid.origin.x);
    REQUIRE(back.values.size() == f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(back.values[i] == f.values[i]);
    REQUIRE(back.gradients.size() == f.gradients.size());
    for (std::size_t i = 0; i < f.gradients.size(); ++i) {
        CHECK(back.gradients[i].x == f.gradients[i].x);
        CHECK(back.gradients[i].y == f.gradients[i].y);
    }
}

TEST_CASE("fnv hashes are stable", "[io]") {
    CHECK(hash_hex(fnv1a_hash("")) == "cbf29ce484222325");
    CHECK(fnv1a_hash("a") != fnv1a_hash("b"));
}
