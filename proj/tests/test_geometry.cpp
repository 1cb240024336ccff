#include <catch_amalgamated.hpp>

#include <random>

#include "gvd/geometry.hpp"

using namespace gvd;
using Catch::Approx;

TEST_CASE("orient signs") {
    CHECK(orient({0, 0}, {1, 0}, {0, 1}) == 1);
    CHECK(orient({0, 0}, {1, 0}, {2, 0}) == 0);
    CHECK(orient({0, 0}, {0, 1}, {1, 0}) == -1);
    CHECK_THROWS_AS(orient({0, 0}, {NAN, 0}, {1, 1}), GvdError);
}

TEST_CASE("orient is antisymmetric") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 1000; ++i) {
        Point p{u(rng), u(rng)}, q{u(rng), u(rng)}, r{u(rng), u(rng)};
        int o = orient(p, q, r);
        if (o == 0) continue;
        CHECK(orient(q, p, r) == -o);
        CHECK(orient(p, r, q) == -o);
        CHECK(orient(r, q, p) == -o);
    }
}

TEST_CASE("equal weights give the perpendicular bisector line") {
    BisectorCurve c = weighted_bisector({{0, 0}, 0}, {{1, 0}, 0});
    CHECK(c.kind() == CurveKind::Line);
    for (double t : {-3.0, -0.5, 0.0, 1.0, 4.0}) CHECK(c.at(t).x == Approx(0.5).margin(1e-15));
}

TEST_CASE("weighted bisector crosses the axis at the solved point") {
    BisectorCurve c = weighted_bisector({{0, 0}, 0.5}, {{2, 0}, 0});
    CHECK(c.kind() == CurveKind::Hyperbola);
    auto ts = c.line_params(Point{0, 1}, 0.0);
    REQUIRE(ts.size() == 1);
    CHECK(c.at(ts[0]).x == Approx(0.75).margin(1e-12));
    CHECK(std::abs(c.at(ts[0]).y) < 1e-12);
}

TEST_CASE("sampled bisector points are equidistant") {
    WeightedSource a{{0, 0}, 0.3}, b{{1, 1}, 0};
    BisectorCurve c = weighted_bisector(a, b);
    for (int i = 0; i <= 400; ++i) {
        double t = -8 + 16.0 * i / 400;
        Point x = c.at(t);
        CHECK(std::abs(weighted_distance(x, a) - weighted_distance(x, b)) <= 1e-9 * std::max(1.0, norm(x)));
    }
}

TEST_CASE("bisector rejects degenerate sources") {
    CHECK_THROWS_AS(weighted_bisector({{0, 0}, 0}, {{0, 0}, 0}), GvdError);
    CHECK_THROWS_AS(weighted_bisector({{0, 0}, 2}, {{1, 0}, 0}), GvdError);
}

TEST_CASE("equidistant point on a segment") {
    auto p = equidistant_point_on_segment({{0, 0}, 0}, {{1, 0}, 0}, {{0, -1}, {1, 1}});
    REQUIRE(p);
    CHECK(p->x == Approx(0.5).margin(1e-12));
    CHECK(p->y == Approx(0.0).margin(1e-12));
    CHECK_FALSE(equidistant_point_on_segment({{0, 0}, 0}, {{1, 0}, 0}, {{0, 0}, {0.4, 0}}));
}

TEST_CASE("equidistant point agrees with plain bisection") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    int found = 0;
    for (int i = 0; i < 500; ++i) {
        WeightedSource a{{u(rng), u(rng)}, 0.2 * u(rng)}, b{{u(rng), u(rng)}, 0.2 * u(rng)};
        Segment s{{u(rng), u(rng)}, {u(rng), u(rng)}};
        auto f = [&](double t) {
            Point y = lerp(s.a, s.b, t);
            return weighted_distance(y, a) - weighted_distance(y, b);
        };
        auto got = equidistant_point_on_segment(a, b, s);
        if ((f(0) > 0) == (f(1) > 0)) {
            CHECK_FALSE(got);
            continue;
        }
        REQUIRE(got);
        double lo = 0, hi = 1;
        while (hi - lo > 1e-12) {
            double mid = 0.5 * (lo + hi);
            ((f(mid) > 0) == (f(0) > 0) ? lo : hi) = mid;
        }
        CHECK(dist(*got, lerp(s.a, s.b, 0.5 * (lo + hi))) <= 1e-9);
        ++found;
    }
    CHECK(found > 50);
}

TEST_CASE("flattened arcs stay within tolerance") {
    BisectorCurve line = weighted_bisector({{0, 0}, 0}, {{1, 0}, 0});
    CHECK(flatten_arc(line, -1, 1, 1e-4).size() == 2);
    BisectorCurve hyp = weighted_bisector({{0, 0}, 0.3}, {{1, 1}, 0});
    auto pts = flatten_arc(hyp, -2, 2, 1e-4);
    CHECK(dist(pts.front(), hyp.at(-2)) == 0);
    CHECK(dist(pts.back(), hyp.at(2)) == 0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        double t0 = hyp.param_of(pts[i - 1]), t1 = hyp.param_of(pts[i]);
        Point mid = hyp.at(0.5 * (t0 + t1));
        CHECK(point_segment_distance(mid, {pts[i - 1], pts[i]}) <= 1e-4);
    }
    auto single = flatten_arc(hyp, 0.5, 0.5, 1e-4);
    REQUIRE(single.size() == 2);
    CHECK(single[0] == single[1]);
}

TEST_CASE("three-source equidistant point is the circumcenter") {
    auto pts = equidistant_points3({{0.2, 0.2}, 0}, {{0.8, 0.2}, 0}, {{0.5, 0.8}, 0});
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].x == Approx(0.5).margin(1e-12));
    CHECK(pts[0].y == Approx(0.425).margin(1e-12));
}
